// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_DOXA_HPP
#define DOXA_DOXA_HPP

#include "doxa/cache.hpp"
#include "doxa/compare.hpp"
#include "doxa/distribution.hpp"
#include "doxa/engine.hpp"
#include "doxa/errors.hpp"
#include "doxa/formula.hpp"
#include "doxa/inference.hpp"
#include "doxa/kb.hpp"
#include "doxa/linear.hpp"
#include "doxa/methods.hpp"
#include "doxa/oracle.hpp"
#include "doxa/parse.hpp"
#include "doxa/rational.hpp"
#include "doxa/solver.hpp"
#include "doxa/structured.hpp"
#include "doxa/version.hpp"
#include "doxa/vocabulary.hpp"
#include "doxa/worlds.hpp"

#endif  // DOXA_DOXA_HPP
