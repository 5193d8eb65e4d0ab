// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_CACHE_HPP
#define DOXA_CACHE_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>

#include "doxa/worlds.hpp"

namespace doxa {

/// 64-bit FNV-1a. Content digests for reports and cache keys; not
/// cryptographic.
inline std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t vocabulary_digest(const Vocabulary& v) {
  std::string s = "p:";
  for (const auto& p : v.predicates()) s += p + ",";
  s += "c:";
  for (const auto& c : v.constants()) s += c + ",";
  return fnv1a(s);
}

/// Binary ensemble dump. Layout (little-endian):
///   magic "DOXAWE1\n", u64 vocabulary digest, i32 N, i32 atom count,
///   i32 constant count, u64 class count, then per class: counts (i32 each),
///   placement (i32 each), log weight (f64). See docs/ensemble-cache.md.
inline void save_ensemble(const WorldEnsemble& ens, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open cache file for writing: " + path);
  const char magic[8] = {'D', 'O', 'X', 'A', 'W', 'E', '1', '\n'};
  out.write(magic, 8);
  auto put = [&out](const void* p, std::size_t n) { out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); };
  const std::uint64_t digest = vocabulary_digest(ens.vocabulary);
  const std::int32_t n = ens.domain_size;
  const std::int32_t atoms = ens.vocabulary.atom_count();
  const std::int32_t consts = ens.vocabulary.constant_count();
  const std::uint64_t count = ens.classes.size();
  put(&digest, 8);
  put(&n, 4);
  put(&atoms, 4);
  put(&consts, 4);
  put(&count, 8);
  for (const auto& cls : ens.classes) {
    for (int c : cls.counts) {
      const std::int32_t v = c;
      put(&v, 4);
    }
    for (int a : cls.placement) {
      const std::int32_t v = a;
      put(&v, 4);
    }
    put(&cls.log_weight, 8);
  }
  put(&ens.log_total, 8);
}

/// Loads a dump if it exists and matches the vocabulary and domain size.
inline std::optional<WorldEnsemble> load_ensemble(const Vocabulary& vocab, int domain_size,
                                                  const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string_view(magic, 8) != "DOXAWE1\n") return std::nullopt;
  auto get = [&in](void* p, std::size_t n) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    return static_cast<bool>(in);
  };
  std::uint64_t digest = 0, count = 0;
  std::int32_t n = 0, atoms = 0, consts = 0;
  if (!get(&digest, 8) || !get(&n, 4) || !get(&atoms, 4) || !get(&consts, 4) || !get(&count, 8))
    return std::nullopt;
  if (digest != vocabulary_digest(vocab) || n != domain_size || atoms != vocab.atom_count() ||
      consts != vocab.constant_count())
    return std::nullopt;
  WorldEnsemble ens;
  ens.vocabulary = vocab;
  ens.domain_size = domain_size;
  ens.classes.resize(count);
  for (auto& cls : ens.classes) {
    cls.counts.resize(static_cast<std::size_t>(atoms));
    cls.placement.resize(static_cast<std::size_t>(consts));
    for (auto& c : cls.counts) {
      std::int32_t v;
      if (!get(&v, 4)) return std::nullopt;
      c = v;
    }
    for (auto& a : cls.placement) {
      std::int32_t v;
      if (!get(&v, 4)) return std::nullopt;
      a = v;
    }
    if (!get(&cls.log_weight, 8)) return std::nullopt;
  }
  if (!get(&ens.log_total, 8)) return std::nullopt;
  return ens;
}

}  // namespace doxa

#endif  // DOXA_CACHE_HPP
