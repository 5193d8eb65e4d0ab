// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_STRUCTURED_HPP
#define DOXA_STRUCTURED_HPP

#include <algorithm>
#include <cstdint>
#include <array>
#include <future>
#include <map>
#include <unordered_map>
#include <optional>
#include <vector>

#include "doxa/engine.hpp"

namespace doxa {
namespace detail {

// Structured counting backend. Instead of walking every (counts, placement)
// class, the atom space is reduced to the coarsest partition the constraint
// masks can see, and the weighted count factorizes:
//
//   * "peel" sets, pinned near zero by an unconditional window (the
//     representative-set pattern), are enumerated explicitly -- their totals
//     are at most hi * N elements;
//   * the remaining cells are grouped by the condition masks; conditions
//     must be pairwise disjoint there, which makes the group counts a
//     multinomial and each group's numerator split a small windowed sum;
//   * placement weights enter as first moments of cell counts, exact by
//     linearity of the free within-cell splits.
//
// Anything outside this shape returns nullopt and the caller falls back to
// plain class enumeration. The two engines produce the same buckets, which
// the tests exploit as an oracle pair.

struct StructuredCell {
  std::uint64_t atom_mask = 0;
  int size = 0;  // number of atoms
};

struct PeelCheck {
  std::vector<int> above_cells;  // peel cell indices (positions in peel list)
  std::vector<int> below_cells;
  bool below_is_domain = false;
  Window win;
};

struct GroupWindow {
  std::uint32_t above_submask = 0;   // subcells inside the numerator
  std::vector<int> above_peel = {};  // peel positions inside the numerator
  std::vector<int> below_peel = {};
  Window win;
};

struct UncondWindow {
  std::vector<int> groups;
  std::vector<int> above_peel;
  Window win;
};

struct Subcell {
  std::vector<int> cells;  // structural cell indices
  int size = 0;
};

struct Group {
  std::vector<int> cells;
  std::vector<Subcell> subcells;
  std::vector<GroupWindow> windows;
  int size = 0;
};

struct StructuredPlan {
  int domain_size = 0;
  int atom_count = 0;
  int bits = 0;
  std::vector<StructuredCell> cells;
  std::vector<int> peel_cells;  // structural cell indices
  std::vector<int> rest_cells;
  std::int64_t peel_total_cap = 0;
  std::vector<PeelCheck> peel_checks;
  std::vector<Group> groups;
  std::vector<UncondWindow> uncond;
  std::vector<std::uint32_t> atom_pattern;  // bucket pattern per constant atom (m == 1)
  bool has_constant = false;
  std::uint32_t fixed_pattern = 0;          // bucket when m == 0
};

inline std::optional<StructuredPlan> plan_structured(const CountQuery& q, int domain_size,
                                                     std::int64_t peel_cap = 192) {
  const Vocabulary& vocab = q.vocabulary;
  const int m = vocab.constant_count();
  if (m > 1) return std::nullopt;
  const int atoms = vocab.atom_count();
  const std::uint64_t all =
      atoms == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << atoms) - 1);

  const auto windows = make_windows(q.statistical, vocab.predicate_count(), q.tau);

  StructuredPlan plan;
  plan.domain_size = domain_size;
  plan.atom_count = atoms;
  plan.bits = static_cast<int>(q.tracked.size());
  plan.has_constant = m == 1;

  // Peel candidates: unconditional windows whose upper bound pins the set
  // near zero at this domain size. Selection is greedy from the smallest
  // cap, and stops before the peel enumeration itself could blow up.
  std::uint64_t smask = 0;
  std::vector<char> is_peel(windows.size(), 0);
  std::int64_t cap_sum = 0;
  {
    std::vector<std::pair<std::int64_t, std::size_t>> candidates;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (windows[i].den_mask != all || windows[i].num_mask == 0) continue;
      const std::int64_t cap =
          std::min<std::int64_t>(floor_scaled(windows[i].hi, domain_size), domain_size);
      if (cap >= 0 && cap <= peel_cap) candidates.emplace_back(cap, i);
    }
    std::sort(candidates.begin(), candidates.end());
    for (const auto& [cap, i] : candidates) {
      const std::uint64_t trial = smask | windows[i].num_mask;
      int cells = 0;
      for (int a = 0; a < atoms; ++a)
        if ((trial >> a) & 1) ++cells;
      const double raw = std::exp(std::lgamma(cap_sum + cap + cells + 1.0) -
                                  std::lgamma(cells + 1.0) - std::lgamma(cap_sum + cap + 1.0));
      if (raw > 2e6) continue;
      is_peel[i] = 1;
      smask = trial;
      cap_sum += cap;
    }
  }
  plan.peel_total_cap = std::min<std::int64_t>(cap_sum, domain_size);

  // Structural cells: atoms grouped by their signature over all masks.
  std::map<std::vector<char>, int> cell_of_sig;
  std::vector<int> cell_of_atom(static_cast<std::size_t>(atoms));
  for (int a = 0; a < atoms; ++a) {
    std::vector<char> sig;
    sig.reserve(2 * windows.size() + 1);
    for (const auto& w : windows) {
      sig.push_back(static_cast<char>((w.num_mask >> a) & 1));
      sig.push_back(static_cast<char>((w.den_mask >> a) & 1));
    }
    sig.push_back(static_cast<char>((smask >> a) & 1));
    auto [it, fresh] = cell_of_sig.emplace(sig, static_cast<int>(plan.cells.size()));
    if (fresh) plan.cells.push_back(StructuredCell{});
    cell_of_atom[static_cast<std::size_t>(a)] = it->second;
    plan.cells[static_cast<std::size_t>(it->second)].atom_mask |= std::uint64_t{1} << a;
    plan.cells[static_cast<std::size_t>(it->second)].size += 1;
  }

  std::vector<int> peel_pos(plan.cells.size(), -1);
  for (std::size_t c = 0; c < plan.cells.size(); ++c) {
    const std::uint64_t cm = plan.cells[c].atom_mask;
    if (smask != 0 && (cm & smask) == cm) {
      peel_pos[c] = static_cast<int>(plan.peel_cells.size());
      plan.peel_cells.push_back(static_cast<int>(c));
    } else {
      plan.rest_cells.push_back(static_cast<int>(c));
    }
  }
  if (plan.peel_cells.size() > 8) return std::nullopt;

  auto peel_positions_in = [&](std::uint64_t mask) {
    std::vector<int> out;
    for (int c : plan.peel_cells) {
      const std::uint64_t cm = plan.cells[static_cast<std::size_t>(c)].atom_mask;
      if ((cm & mask) == cm) out.push_back(peel_pos[static_cast<std::size_t>(c)]);
    }
    return out;
  };

  // Classify constraints.
  struct RestCond {
    std::uint64_t num_mask, den_mask;
    Window win;
  };
  std::vector<RestCond> rest_cond;
  std::vector<std::size_t> rest_uncond;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& w = windows[i];
    if (is_peel[i] || (w.den_mask & ~smask) == 0) {
      PeelCheck pc;
      pc.win = w;
      pc.above_cells = peel_positions_in(w.num_mask);
      if (w.den_mask == all)
        pc.below_is_domain = true;
      else
        pc.below_cells = peel_positions_in(w.den_mask);
      plan.peel_checks.push_back(std::move(pc));
      continue;
    }
    if (w.den_mask == all)
      rest_uncond.push_back(i);
    else
      rest_cond.push_back(RestCond{w.num_mask, w.den_mask, w});
  }

  // Group the rest cells by membership in condition masks and unconditional
  // numerators.
  std::vector<std::uint64_t> group_masks;
  for (const auto& rc : rest_cond) group_masks.push_back(rc.den_mask);
  for (std::size_t i : rest_uncond) group_masks.push_back(windows[i].num_mask);

  std::map<std::vector<char>, int> group_of_sig;
  std::vector<int> group_of_cell(plan.cells.size(), -1);
  for (int c : plan.rest_cells) {
    std::vector<char> sig;
    const std::uint64_t cm = plan.cells[static_cast<std::size_t>(c)].atom_mask;
    for (std::uint64_t gm : group_masks) sig.push_back(static_cast<char>((cm & gm) == cm));
    auto [it, fresh] = group_of_sig.emplace(sig, static_cast<int>(plan.groups.size()));
    if (fresh) plan.groups.push_back(Group{});
    group_of_cell[static_cast<std::size_t>(c)] = it->second;
    plan.groups[static_cast<std::size_t>(it->second)].cells.push_back(c);
  }
  if (plan.groups.size() > 5) return std::nullopt;

  // Each condition must land on exactly one group.
  for (const auto& rc : rest_cond) {
    int gid = -1;
    bool ok = true;
    for (int c : plan.rest_cells) {
      const std::uint64_t cm = plan.cells[static_cast<std::size_t>(c)].atom_mask;
      if ((cm & rc.den_mask) != cm) continue;
      if (gid < 0) gid = group_of_cell[static_cast<std::size_t>(c)];
      if (group_of_cell[static_cast<std::size_t>(c)] != gid) ok = false;
    }
    if (!ok || gid < 0) return std::nullopt;
    GroupWindow gw;
    gw.win = rc.win;
    gw.above_peel = peel_positions_in(rc.num_mask);
    gw.below_peel = peel_positions_in(rc.den_mask);
    plan.groups[static_cast<std::size_t>(gid)].windows.push_back(std::move(gw));
  }

  for (std::size_t i : rest_uncond) {
    UncondWindow uw;
    uw.win = windows[i];
    uw.above_peel = peel_positions_in(windows[i].num_mask);
    std::vector<char> in_group(plan.groups.size(), 0);
    for (int c : plan.rest_cells) {
      const std::uint64_t cm = plan.cells[static_cast<std::size_t>(c)].atom_mask;
      if ((cm & windows[i].num_mask) == cm)
        in_group[static_cast<std::size_t>(group_of_cell[static_cast<std::size_t>(c)])] = 1;
    }
    for (std::size_t g = 0; g < plan.groups.size(); ++g)
      if (in_group[g]) uw.groups.push_back(static_cast<int>(g));
    plan.uncond.push_back(std::move(uw));
  }

  // Subcells: partition each group's cells by the numerators of conditions.
  for (auto& g : plan.groups) {
    std::map<std::vector<char>, int> sub_of_sig;
    std::vector<int> sub_of_cell(plan.cells.size(), -1);
    for (int c : g.cells) {
      std::vector<char> sig;
      const std::uint64_t cm = plan.cells[static_cast<std::size_t>(c)].atom_mask;
      for (const auto& rc : rest_cond) sig.push_back(static_cast<char>((cm & rc.num_mask) == cm));
      auto [it, fresh] = sub_of_sig.emplace(sig, static_cast<int>(g.subcells.size()));
      if (fresh) g.subcells.push_back(Subcell{});
      sub_of_cell[static_cast<std::size_t>(c)] = it->second;
      g.subcells[static_cast<std::size_t>(it->second)].cells.push_back(c);
    }
    if (g.subcells.size() > 4) return std::nullopt;
    for (auto& sc : g.subcells)
      for (int c : sc.cells) sc.size += plan.cells[static_cast<std::size_t>(c)].size;
    for (int c : g.cells) g.size += plan.cells[static_cast<std::size_t>(c)].size;
    for (auto& gw : g.windows) {
      for (std::size_t s = 0; s < g.subcells.size(); ++s) {
        bool inside = true;
        for (int c : g.subcells[s].cells) {
          const std::uint64_t cm = plan.cells[static_cast<std::size_t>(c)].atom_mask;
          if ((cm & gw.win.num_mask) != cm) inside = false;
        }
        if (inside) gw.above_submask |= 1u << s;
      }
    }
  }

  // Tracked-formula pattern per constant atom.
  if (plan.has_constant) {
    plan.atom_pattern.resize(static_cast<std::size_t>(atoms));
    std::vector<int> catoms(1, 0);
    for (int a = 0; a < atoms; ++a) {
      catoms[0] = a;
      std::uint32_t p = 0;
      for (int i = 0; i < plan.bits; ++i)
        if (q.tracked[static_cast<std::size_t>(i)].eval_closed(catoms)) p |= 1u << i;
      plan.atom_pattern[static_cast<std::size_t>(a)] = p;
    }
  } else {
    std::vector<int> none;
    std::uint32_t p = 0;
    for (int i = 0; i < plan.bits; ++i)
      if (q.tracked[static_cast<std::size_t>(i)].eval_closed(none)) p |= 1u << i;
    plan.fixed_pattern = p;
  }

  return plan;
}

// ---------------------------------------------------------------------------
// Evaluation of a structured plan.

struct PeelConfig {
  std::array<std::int16_t, 8> counts{};  // per peel position
  std::int16_t total = 0;
  double log_weight_head = 0.0;  // lf(N) - lf(N-s) - sum lf(s_c) + sum s_c ln u_c
};

struct GroupTables {
  std::vector<double> plain;                // [m]
  std::vector<std::vector<double>> moment;  // [cell_local][m]
};

class StructuredRun {
 public:
  StructuredRun(const StructuredPlan& plan, std::int64_t term_budget)
      : plan_(plan), lf_(plan.domain_size), term_budget_(term_budget) {}

  BucketWeights run() {
    enumerate_peel_configs();
    estimate_or_throw();
    build_group_tables();
    cell_moment_.assign(plan_.cells.size(), LogSum{});
    combine_all();

    BucketWeights out;
    out.bits = plan_.bits;
    out.engine = "structured";
    out.log_weight.assign(static_cast<std::size_t>(1) << plan_.bits, kNegInf);
    if (!plan_.has_constant) {
      out.log_weight[plan_.fixed_pattern] = total_.value();
      return out;
    }
    std::vector<LogSum> buckets(out.log_weight.size());
    for (std::size_t c = 0; c < plan_.cells.size(); ++c) {
      const auto& cell = plan_.cells[c];
      const double mv = cell_moment_[c].value();
      if (mv == kNegInf) continue;
      std::vector<int> per_pattern(out.log_weight.size(), 0);
      for (int a = 0; a < plan_.atom_count; ++a)
        if ((cell.atom_mask >> a) & 1)
          per_pattern[plan_.atom_pattern[static_cast<std::size_t>(a)]]++;
      for (std::size_t p = 0; p < per_pattern.size(); ++p) {
        if (per_pattern[p] == 0) continue;
        LogSum one;
        one.add(mv + std::log(static_cast<double>(per_pattern[p]) / cell.size));
        buckets[p].merge(one);
      }
    }
    for (std::size_t p = 0; p < buckets.size(); ++p) out.log_weight[p] = buckets[p].value();
    return out;
  }

 private:
  void enumerate_peel_configs() {
    const int np = static_cast<int>(plan_.peel_cells.size());
    if (np == 0) {
      PeelConfig cfg;
      if (peel_config_ok(cfg)) configs_.push_back(cfg);
      return;
    }
    const double raw = std::exp(std::lgamma(plan_.peel_total_cap + np + 1.0) -
                                std::lgamma(np + 1.0) - std::lgamma(plan_.peel_total_cap + 1.0));
    if (raw > 5e6) throw EnsembleTooLarge("peel space too large at this domain size");
    configs_.reserve(static_cast<std::size_t>(std::min(raw, 5e6)));
    PeelConfig cfg;
    enumerate_peel_rec(cfg, 0, np, 0);
  }

  void enumerate_peel_rec(PeelConfig& cfg, int level, int np, int total) {
    if (level == np) {
      cfg.total = static_cast<std::int16_t>(total);
      double lw = lf_(plan_.domain_size) - lf_(plan_.domain_size - total);
      for (int i = 0; i < np; ++i) {
        const auto& cell = plan_.cells[static_cast<std::size_t>(plan_.peel_cells[static_cast<std::size_t>(i)])];
        lw -= lf_(cfg.counts[static_cast<std::size_t>(i)]);
        if (cfg.counts[static_cast<std::size_t>(i)] > 0)
          lw += cfg.counts[static_cast<std::size_t>(i)] * std::log(static_cast<double>(cell.size));
      }
      cfg.log_weight_head = lw;
      if (peel_config_ok(cfg)) configs_.push_back(cfg);
      return;
    }
    const int cap = static_cast<int>(plan_.peel_total_cap) - total;
    for (int v = 0; v <= cap; ++v) {
      cfg.counts[static_cast<std::size_t>(level)] = static_cast<std::int16_t>(v);
      enumerate_peel_rec(cfg, level + 1, np, total + v);
    }
  }

  static std::int64_t config_sum(const PeelConfig& cfg, const std::vector<int>& positions) {
    std::int64_t s = 0;
    for (int p : positions) s += cfg.counts[static_cast<std::size_t>(p)];
    return s;
  }

  bool peel_config_ok(const PeelConfig& cfg) const {
    for (const auto& pc : plan_.peel_checks) {
      const std::int64_t above = config_sum(cfg, pc.above_cells);
      const std::int64_t below =
          pc.below_is_domain ? plan_.domain_size : config_sum(cfg, pc.below_cells);
      if (!pc.win.accepts(above, below)) return false;
    }
    return true;
  }

  /// Shift signature packed into one word: one byte per (above, below) pair.
  /// Peel totals are capped well below 256, so packing is collision-free.
  std::uint64_t group_shifts(const Group& g, const PeelConfig& cfg) const {
    std::uint64_t sig = 0;
    for (const auto& w : g.windows) {
      sig = (sig << 8) | static_cast<std::uint64_t>(config_sum(cfg, w.above_peel) & 0xff);
      sig = (sig << 8) | static_cast<std::uint64_t>(config_sum(cfg, w.below_peel) & 0xff);
    }
    return sig;
  }

  static std::int64_t unpack_shift(std::uint64_t sig, std::size_t window_count, std::size_t slot) {
    const std::size_t shift_bits = 8 * (2 * window_count - 1 - slot);
    return static_cast<std::int64_t>((sig >> shift_bits) & 0xff);
  }

  // Rough upper bounds on the work ahead; refuses plainly hopeless points so
  // that a sweep lane fails in microseconds rather than minutes. The width
  // rules mirror the bound propagation in the loops below.
  double estimated_window_width(const Window& win, bool mine, bool future, bool all_future,
                                double fallback) const {
    const double ha = static_cast<double>(floor_scaled(win.hi, plan_.domain_size));
    const double la =
        win.has_lo ? static_cast<double>(ceil_scaled(win.lo, plan_.domain_size)) : 0.0;
    const bool tight = (mine && !future) || (!mine && future && all_future);
    if (!tight) return fallback;
    return std::max(1.0, ha - la + 1.0);
  }

  void estimate_or_throw() const {
    const double n1 = plan_.domain_size + 1.0;
    double combine_width = 1.0;
    const std::size_t q = plan_.groups.size();
    for (std::size_t level = 0; level + 1 < q; ++level) {
      double w = n1;
      for (const auto& uw : plan_.uncond) {
        bool mine = false, future = false, all_future = true;
        for (std::size_t g2 = 0; g2 < q; ++g2) {
          bool in_a = false;
          for (int g : uw.groups)
            if (static_cast<std::size_t>(g) == g2) in_a = true;
          if (g2 == level) mine = in_a;
          if (g2 > level) {
            if (in_a)
              future = true;
            else
              all_future = false;
          }
        }
        w = std::min(w, estimated_window_width(uw.win, mine, future, all_future, n1));
      }
      combine_width *= w;
    }
    const double combine_cost = static_cast<double>(configs_.size()) * combine_width;

    double table_cost = 0.0;
    for (const auto& g : plan_.groups) {
      double per_m = 1.0;
      for (std::size_t level = 0; level + 1 < g.subcells.size(); ++level) {
        double w = n1;
        for (const auto& gw : g.windows) {
          const bool mine = (gw.above_submask >> level) & 1;
          bool future = false, all_future = true;
          for (std::size_t s = level + 1; s < g.subcells.size(); ++s) {
            if ((gw.above_submask >> s) & 1)
              future = true;
            else
              all_future = false;
          }
          w = std::min(w, estimated_window_width(gw.win, mine, future, all_future, n1));
        }
        per_m *= w;
      }
      // distinct shift signatures: at most one per (above, below) pair and
      // per config, and exactly one for a window-free group
      double sig_bound = 1.0;
      for (std::size_t wi = 0; wi < g.windows.size(); ++wi)
        sig_bound *= static_cast<double>((plan_.peel_total_cap + 1) * (plan_.peel_total_cap + 1));
      const double sigs =
          std::min(std::min(sig_bound, static_cast<double>(configs_.size()) + 1.0), 1e4);
      table_cost += sigs * n1 * per_m;
    }
    if (combine_cost + table_cost > static_cast<double>(term_budget_))
      throw EnsembleTooLarge("structured evaluation would exceed its term budget");
  }

  void build_group_tables() {
    tables_.resize(plan_.groups.size());
    const double n1 = plan_.domain_size + 1.0;
    for (std::size_t g = 0; g < plan_.groups.size(); ++g) {
      const Group& group = plan_.groups[g];
      std::vector<std::uint64_t> sigs;
      {
        std::unordered_map<std::uint64_t, char> seen;
        for (const auto& cfg : configs_) {
          const std::uint64_t sig = group_shifts(group, cfg);
          if (seen.emplace(sig, 1).second) sigs.push_back(sig);
        }
      }
      // exact signature count is known now; re-check the budget before the
      // heavy lifting
      double per_m = 1.0;
      for (std::size_t level = 0; level + 1 < group.subcells.size(); ++level) {
        double w = n1;
        for (const auto& gw : group.windows) {
          const bool mine = (gw.above_submask >> level) & 1;
          bool future = false, all_future = true;
          for (std::size_t s = level + 1; s < group.subcells.size(); ++s) {
            if ((gw.above_submask >> s) & 1)
              future = true;
            else
              all_future = false;
          }
          w = std::min(w, estimated_window_width(gw.win, mine, future, all_future, n1));
        }
        per_m *= w;
      }
      if (static_cast<double>(sigs.size()) * n1 * per_m > static_cast<double>(term_budget_))
        throw EnsembleTooLarge("structured tables would exceed the term budget");

      std::vector<GroupTables> built(sigs.size());
      constexpr std::size_t kChunks = 16;
      if (sigs.size() < 4) {
        for (std::size_t i = 0; i < sigs.size(); ++i) built[i] = make_tables(group, sigs[i]);
      } else {
        std::vector<std::future<void>> futures;
        const std::size_t per = (sigs.size() + kChunks - 1) / kChunks;
        for (std::size_t c = 0; c < kChunks; ++c) {
          const std::size_t lo = c * per;
          const std::size_t hi = std::min(sigs.size(), lo + per);
          if (lo >= hi) break;
          futures.push_back(std::async(std::launch::async, [this, &group, &sigs, &built, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) built[i] = make_tables(group, sigs[i]);
          }));
        }
        for (auto& f : futures) f.get();
      }
      for (std::size_t i = 0; i < sigs.size(); ++i) tables_[g].emplace(sigs[i], std::move(built[i]));
    }
  }

  GroupTables make_tables(const Group& g, std::uint64_t packed_shifts) {
    std::vector<std::int64_t> shifts(2 * g.windows.size(), 0);
    for (std::size_t i = 0; i < shifts.size(); ++i)
      shifts[i] = unpack_shift(packed_shifts, g.windows.size(), i);
    return make_tables_impl(g, shifts);
  }

  GroupTables make_tables_impl(const Group& g, const std::vector<std::int64_t>& shifts) {
    const int nmax = plan_.domain_size;
    GroupTables t;
    t.plain.assign(static_cast<std::size_t>(nmax) + 1, kNegInf);
    t.moment.assign(g.cells.size(),
                    std::vector<double>(static_cast<std::size_t>(nmax) + 1, kNegInf));

    const int nsub = static_cast<int>(g.subcells.size());
    std::vector<int> c(static_cast<std::size_t>(std::max(nsub, 1)), 0);
    std::vector<std::int64_t> above_fixed(g.windows.size(), 0);
    for (int m = 0; m <= nmax; ++m) {
      LogSum plain;
      std::vector<LogSum> mom(g.cells.size());
      for (std::size_t wi = 0; wi < g.windows.size(); ++wi)
        above_fixed[wi] = shifts[2 * wi];
      subcell_sum(g, shifts, m, c, above_fixed, 0, m, 0.0, plain, mom);
      t.plain[static_cast<std::size_t>(m)] = plain.value();
      for (std::size_t i = 0; i < mom.size(); ++i)
        t.moment[i][static_cast<std::size_t>(m)] = mom[i].value();
    }
    return t;
  }

  void subcell_leaf(const Group& g, const std::vector<std::int64_t>& shifts, int m,
                    const std::vector<int>& c, double lw, LogSum& plain,
                    std::vector<LogSum>& mom) {
    const int nsub = static_cast<int>(g.subcells.size());
    for (std::size_t wi = 0; wi < g.windows.size(); ++wi) {
      const auto& gw = g.windows[wi];
      std::int64_t above = shifts[2 * wi];
      for (int s = 0; s < nsub; ++s)
        if ((gw.above_submask >> s) & 1) above += c[static_cast<std::size_t>(s)];
      const std::int64_t below = shifts[2 * wi + 1] + m;
      if (!gw.win.accepts(above, below)) return;
    }
    const double w = lw + lf_(m);
    plain.add(w);
    std::size_t local = 0;
    for (int s = 0; s < nsub; ++s) {
      const auto& sc = g.subcells[static_cast<std::size_t>(s)];
      const int cs = c[static_cast<std::size_t>(s)];
      for (int cellidx : sc.cells) {
        if (cs > 0) {
          const double u = plan_.cells[static_cast<std::size_t>(cellidx)].size;
          mom[local].add(w + std::log(cs * u / sc.size));
        }
        ++local;
      }
    }
  }

  void subcell_sum(const Group& g, const std::vector<std::int64_t>& shifts, int m,
                   std::vector<int>& c, std::vector<std::int64_t>& above_fixed, int level, int rem,
                   double lw, LogSum& plain, std::vector<LogSum>& mom) {
    const int nsub = static_cast<int>(g.subcells.size());
    if (nsub == 0) {
      if (m == 0) subcell_leaf(g, shifts, m, c, lw, plain, mom);
      return;
    }
    if (level == nsub - 1) {
      c[static_cast<std::size_t>(level)] = rem;
      const auto& sc = g.subcells[static_cast<std::size_t>(level)];
      double w = lw - lf_(rem);
      if (rem > 0) w += rem * std::log(static_cast<double>(sc.size));
      subcell_leaf(g, shifts, m, c, w, plain, mom);
      return;
    }
    // Window-propagated bounds on this subcell's count. When every later
    // subcell lies inside a numerator, the remainder is committed and the
    // bound tightens from both sides.
    std::int64_t lo = 0, hi = rem;
    for (std::size_t wi = 0; wi < g.windows.size(); ++wi) {
      const auto& gw = g.windows[wi];
      const std::int64_t below = shifts[2 * wi + 1] + m;
      if (below == 0) continue;  // empty-denominator convention checked at the leaf
      const std::int64_t ha = floor_scaled(gw.win.hi, below);
      const std::int64_t la = gw.win.has_lo ? ceil_scaled(gw.win.lo, below) : INT64_MIN / 2;
      const bool mine = (gw.above_submask >> level) & 1;
      bool future = false, all_future = true;
      for (int s = level + 1; s < nsub; ++s) {
        if ((gw.above_submask >> s) & 1)
          future = true;
        else
          all_future = false;
      }
      const std::int64_t fixed = above_fixed[wi];
      if (mine) {
        if (!future) {
          hi = std::min<std::int64_t>(hi, ha - fixed);
          lo = std::max<std::int64_t>(lo, la - fixed);
        } else if (all_future) {
          // the whole remainder counts: constant in this level's value
          if (fixed + rem > ha || fixed + rem < la) return;
        } else {
          hi = std::min<std::int64_t>(hi, ha - fixed);
          if (la - fixed > rem) return;
        }
      } else if (future) {
        if (fixed > ha) return;
        if (la > fixed) hi = std::min<std::int64_t>(hi, rem - (la - fixed));
        if (all_future) lo = std::max<std::int64_t>(lo, rem - (ha - fixed));
      } else {
        if (fixed > ha || fixed < la) return;
      }
    }
    if (hi < lo) return;
    const auto& sc = g.subcells[static_cast<std::size_t>(level)];
    for (std::int64_t v = lo; v <= hi; ++v) {
      c[static_cast<std::size_t>(level)] = static_cast<int>(v);
      double w = lw - lf_(static_cast<int>(v));
      if (v > 0) w += v * std::log(static_cast<double>(sc.size));
      for (std::size_t wi = 0; wi < g.windows.size(); ++wi)
        if ((g.windows[wi].above_submask >> level) & 1) above_fixed[wi] += v;
      subcell_sum(g, shifts, m, c, above_fixed, level + 1, rem - static_cast<int>(v), w, plain,
                  mom);
      for (std::size_t wi = 0; wi < g.windows.size(); ++wi)
        if ((g.windows[wi].above_submask >> level) & 1) above_fixed[wi] -= v;
    }
  }

  struct Accumulators {
    LogSum total;
    std::vector<LogSum> cell_moment;
  };

  /// Peel configs are split into a fixed number of contiguous chunks that
  /// run concurrently; the chunk boundaries and the ordered merge keep the
  /// result independent of the thread count.
  void combine_all() {
    constexpr std::size_t kChunks = 16;
    const std::size_t ncells = plan_.cells.size();
    if (configs_.size() < 2 * kChunks) {
      Accumulators acc;
      acc.cell_moment.assign(ncells, LogSum{});
      for (const auto& cfg : configs_) combine(cfg, acc);
      total_ = acc.total;
      cell_moment_ = std::move(acc.cell_moment);
      return;
    }
    std::vector<std::future<Accumulators>> futures;
    const std::size_t per = (configs_.size() + kChunks - 1) / kChunks;
    for (std::size_t c = 0; c < kChunks; ++c) {
      const std::size_t lo = c * per;
      const std::size_t hi = std::min(configs_.size(), lo + per);
      if (lo >= hi) break;
      futures.push_back(std::async(std::launch::async, [this, lo, hi, ncells] {
        Accumulators acc;
        acc.cell_moment.assign(ncells, LogSum{});
        for (std::size_t i = lo; i < hi; ++i) combine(configs_[i], acc);
        return acc;
      }));
    }
    Accumulators merged;
    merged.cell_moment.assign(ncells, LogSum{});
    for (auto& f : futures) {
      Accumulators acc = f.get();
      merged.total.merge(acc.total);
      for (std::size_t i = 0; i < ncells; ++i) merged.cell_moment[i].merge(acc.cell_moment[i]);
    }
    total_ = merged.total;
    cell_moment_ = std::move(merged.cell_moment);
  }

  void combine(const PeelConfig& cfg, Accumulators& acc) const {
    const int rest = plan_.domain_size - cfg.total;
    const std::size_t q = plan_.groups.size();
    std::vector<std::int64_t> uncond_fixed(plan_.uncond.size());
    for (std::size_t i = 0; i < plan_.uncond.size(); ++i)
      uncond_fixed[i] = config_sum(cfg, plan_.uncond[i].above_peel);

    if (q == 0) {
      if (rest != 0) return;
      for (std::size_t i = 0; i < plan_.uncond.size(); ++i)
        if (!plan_.uncond[i].win.accepts(uncond_fixed[i], plan_.domain_size)) return;
      acc.total.add(cfg.log_weight_head);
      add_peel_moments(cfg, cfg.log_weight_head, acc);
      return;
    }
    std::vector<const GroupTables*> gt(q);
    for (std::size_t g = 0; g < q; ++g)
      gt[g] = &tables_[g].at(group_shifts(plan_.groups[g], cfg));

    std::vector<int> mg(q, 0);
    combine_rec(cfg, gt, uncond_fixed, mg, 0, rest, cfg.log_weight_head + lf_(rest), acc);
  }

  void combine_rec(const PeelConfig& cfg, const std::vector<const GroupTables*>& gt,
                   std::vector<std::int64_t>& uncond_fixed, std::vector<int>& mg,
                   std::size_t level, int rem, double lw, Accumulators& acc) const {
    const std::size_t q = plan_.groups.size();
    if (level == q - 1) {
      mg[level] = rem;
      for (std::size_t i = 0; i < plan_.uncond.size(); ++i) {
        std::int64_t above = uncond_fixed[i];
        for (int g : plan_.uncond[i].groups)
          if (static_cast<std::size_t>(g) == level) above += rem;
        if (!plan_.uncond[i].win.accepts(above, plan_.domain_size)) return;
      }
      double w = lw;
      for (std::size_t g = 0; g < q; ++g) {
        const double gp = gt[g]->plain[static_cast<std::size_t>(mg[g])];
        if (gp == kNegInf) return;
        w += gp - lf_(mg[g]);
      }
      acc.total.add(w);
      add_peel_moments(cfg, w, acc);
      for (std::size_t g = 0; g < q; ++g) {
        const auto& cells = plan_.groups[g].cells;
        const double gp = gt[g]->plain[static_cast<std::size_t>(mg[g])];
        for (std::size_t i = 0; i < cells.size(); ++i) {
          const double gm = gt[g]->moment[i][static_cast<std::size_t>(mg[g])];
          if (gm != kNegInf)
            acc.cell_moment[static_cast<std::size_t>(cells[i])].add(w - gp + gm);
        }
      }
      return;
    }
    std::int64_t lo = 0, hi = rem;
    for (std::size_t i = 0; i < plan_.uncond.size(); ++i) {
      const auto& uw = plan_.uncond[i];
      const std::int64_t ha = floor_scaled(uw.win.hi, plan_.domain_size);
      const std::int64_t la =
          uw.win.has_lo ? ceil_scaled(uw.win.lo, plan_.domain_size) : INT64_MIN / 2;
      bool mine = false, future = false, all_future = true;
      for (std::size_t g2 = 0; g2 < q; ++g2) {
        bool in_a = false;
        for (int g : uw.groups)
          if (static_cast<std::size_t>(g) == g2) in_a = true;
        if (g2 == level) mine = in_a;
        if (g2 > level) {
          if (in_a)
            future = true;
          else
            all_future = false;
        }
      }
      const std::int64_t fixed = uncond_fixed[i];
      if (mine) {
        if (!future) {
          hi = std::min<std::int64_t>(hi, ha - fixed);
          lo = std::max<std::int64_t>(lo, la - fixed);
        } else if (all_future) {
          if (fixed + rem > ha || fixed + rem < la) return;
        } else {
          hi = std::min<std::int64_t>(hi, ha - fixed);
          if (la - fixed > rem) return;
        }
      } else if (future) {
        if (fixed > ha) return;
        if (la > fixed) hi = std::min<std::int64_t>(hi, rem - (la - fixed));
        if (all_future) lo = std::max<std::int64_t>(lo, rem - (ha - fixed));
      } else {
        if (fixed > ha || fixed < la) return;
      }
    }
    if (hi < lo) return;
    for (std::int64_t v = lo; v <= hi; ++v) {
      mg[level] = static_cast<int>(v);
      for (std::size_t i = 0; i < plan_.uncond.size(); ++i)
        for (int g : plan_.uncond[i].groups)
          if (static_cast<std::size_t>(g) == level) uncond_fixed[i] += v;
      combine_rec(cfg, gt, uncond_fixed, mg, level + 1, rem - static_cast<int>(v), lw, acc);
      for (std::size_t i = 0; i < plan_.uncond.size(); ++i)
        for (int g : plan_.uncond[i].groups)
          if (static_cast<std::size_t>(g) == level) uncond_fixed[i] -= v;
    }
  }

  void add_peel_moments(const PeelConfig& cfg, double w, Accumulators& acc) const {
    for (std::size_t i = 0; i < plan_.peel_cells.size(); ++i)
      if (cfg.counts[i] > 0)
        acc.cell_moment[static_cast<std::size_t>(plan_.peel_cells[i])].add(
            w + std::log(static_cast<double>(cfg.counts[i])));
  }

  const StructuredPlan& plan_;
  LogFactorials lf_;
  std::int64_t term_budget_;
  std::vector<PeelConfig> configs_;
  std::vector<std::unordered_map<std::uint64_t, GroupTables>> tables_;
  LogSum total_;
  std::vector<LogSum> cell_moment_;
};

inline std::optional<BucketWeights> weigh_buckets_structured(const CountQuery& q, int domain_size,
                                                             const EngineOptions& opts) {
  auto plan = plan_structured(q, domain_size);
  if (!plan) return std::nullopt;
  StructuredRun run(*plan, static_cast<std::int64_t>(opts.term_budget));
  return run.run();
}

}  // namespace detail

/// Single entry point for weighing a query at one (N, tau) point: the
/// structured engine when the constraint shape allows it, class enumeration
/// otherwise.
inline BucketWeights weigh_buckets(const CountQuery& q, int domain_size,
                                   const EngineOptions& opts = {}) {
  for (const auto& f : q.tracked)
    if (f.uses_variable()) throw KindMismatch("tracked formulas must be closed");
  if (opts.allow_structured) {
    try {
      if (auto r = detail::weigh_buckets_structured(q, domain_size, opts)) return *r;
    } catch (const EnsembleTooLarge&) {
      if (!opts.allow_classes) throw;
    }
  }
  if (!opts.allow_classes)
    throw EnsembleTooLarge("structured engine cannot handle this query shape");
  return detail::weigh_buckets_classes(q, domain_size, opts);
}

}  // namespace doxa

#endif  // DOXA_STRUCTURED_HPP
