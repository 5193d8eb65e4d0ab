// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: load a knowledge-base file, run a query by
// method, compare methods against each other, or run the world oracle.
// Exit codes: 0 defined value / all checks pass, 2 undefined result,
// 1 usage or parse errors.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "doxa/doxa.hpp"
#include "doxa/oracle.hpp"
#include "doxa/report.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw doxa::Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

doxa::Formula parse_query(const std::string& text, const doxa::KnowledgeBase& kb) {
  // Reuse the knowledge-base grammar: a query is a single closed fact.
  std::string synthetic = "pred";
  for (const auto& p : kb.vocabulary.predicates()) synthetic += " " + p;
  synthetic += ".\nconst";
  for (const auto& c : kb.vocabulary.constants()) synthetic += " " + c;
  synthetic += ".\n" + text + "\n";
  const doxa::KnowledgeBase q = doxa::parse_knowledge_base(synthetic);
  if (q.facts.size() != 1 || !q.statistical.empty() || !q.beliefs.empty())
    throw doxa::Error("query must be a single closed formula");
  return q.facts.front();
}

doxa::Rational parse_rational_flag(const std::string& text) {
  const doxa::KnowledgeBase dummy = doxa::parse_knowledge_base(
      "pred P. const.\nprop(P(x)) <~ " + text + "\n");
  return dummy.statistical.front().bound;
}

struct ScheduleFlags {
  std::vector<int> domain_sizes;
  std::vector<std::string> taus;
  double epsilon = -1;
  double stability = -1;
  double class_budget = -1;
  double term_budget = -1;
  int stable_diffs = -1;

  doxa::SweepSchedule resolve() const {
    doxa::SweepSchedule s;
    if (!domain_sizes.empty()) s.domain_sizes = domain_sizes;
    if (!taus.empty()) {
      s.tolerances.clear();
      for (const auto& t : taus) s.tolerances.push_back(parse_rational_flag(t));
    }
    if (epsilon > 0) s.epsilon = epsilon;
    if (stability > 0) s.tau_stability = stability;
    if (stable_diffs > 0) s.stable_diffs = stable_diffs;
    if (class_budget > 0) s.engine.class_budget = class_budget;
    if (term_budget > 0) s.engine.term_budget = term_budget;
    return s;
  }
};

std::string method_table(const doxa::MethodResult& r) {
  std::ostringstream out;
  out << "method   " << r.method << "\n";
  if (r.defined()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", *r.value);
    out << "value    " << buf << (r.vacuous ? "  (vacuous)" : "") << "\n";
  } else {
    out << "value    UNDEFINED (" << doxa::to_string(r.reason) << ")\n";
  }
  if (!r.points.empty()) {
    out << "sweep    n, tau -> value\n";
    for (const auto& p : r.points) {
      out << "         " << p.domain_size << ", " << p.tau.str() << " -> ";
      if (p.failed)
        out << "error: " << doxa::to_string(p.fail_reason);
      else {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", p.value);
        out << buf << (p.vacuous ? " (vacuous)" : "");
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string comparison_table(const doxa::MethodComparison& cmp) {
  std::ostringstream out;
  out << "method        value\n";
  for (const auto& m : cmp.methods) {
    char buf[64];
    if (m.defined())
      std::snprintf(buf, sizeof(buf), "%-13s %.6f%s", m.method.c_str(), *m.value,
                    m.vacuous ? " (vacuous)" : "");
    else
      std::snprintf(buf, sizeof(buf), "%-13s UNDEFINED (%s)", m.method.c_str(),
                    doxa::to_string(m.reason));
    out << buf << "\n";
  }
  out << "\ncheck                          lhs vs rhs            delta      status\n";
  for (const auto& c : cmp.checks) {
    char buf[128];
    const std::string pair = c.lhs + " vs " + c.rhs;
    if (c.delta)
      std::snprintf(buf, sizeof(buf), "%-30s %-21s %-10.6f %s", c.name.c_str(), pair.c_str(),
                    *c.delta,
                    c.status == doxa::TheoremCheck::Status::Pass ? "PASS" : "FAIL");
    else
      std::snprintf(buf, sizeof(buf), "%-30s %-21s %-10s %s", c.name.c_str(), pair.c_str(), "-",
                    "VACUOUS");
    out << buf << "\n";
  }
  out << "\noverall: " << (cmp.all_pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

void emit(const std::string& text) {
  // single atomic write
  std::fwrite(text.data(), 1, text.size(), stdout);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doxa: degrees of belief from statistical and subjective knowledge bases"};
  app.require_subcommand(1);

  std::string kb_path, query_text, method = "rw", format = "json", at_point, fresh_pred = "S";
  bool no_sweep = false;
  double tolerance = 0.03;
  ScheduleFlags sf;
  int oracle_max_n = 5, oracle_max_preds = 3, oracle_max_consts = 2;

  auto add_schedule_flags = [&](CLI::App* cmd) {
    cmd->add_option("--n-schedule", sf.domain_sizes, "domain sizes for the sweep")->delimiter(',');
    cmd->add_option("--tau-schedule", sf.taus, "tolerances, decreasing")->delimiter(',');
    cmd->add_option("--epsilon", sf.epsilon, "Cauchy criterion between successive sizes");
    cmd->add_option("--stability", sf.stability, "allowed gap between the two smallest tolerances");
    cmd->add_option("--stable-diffs", sf.stable_diffs, "consecutive stable gaps required");
    cmd->add_option("--class-budget", sf.class_budget, "class-space budget");
    cmd->add_option("--term-budget", sf.term_budget, "structured-engine term budget");
  };

  CLI::App* q = app.add_subcommand("query", "evaluate one query by one method");
  q->add_option("kb", kb_path, "knowledge base file")->required();
  q->add_option("--query", query_text, "closed formula to evaluate")->required();
  q->add_option("--method", method, "rw | cew | cef | rs | me")
      ->check(CLI::IsMember({"rw", "cew", "cef", "rs", "me"}));
  q->add_option("--format", format, "json | table")->check(CLI::IsMember({"json", "table"}));
  q->add_option("--at", at_point, "evaluate at a single point, e.g. --at 100,0.05");
  q->add_flag("--no-sweep", no_sweep, "apply the method to the limit process (cef only)");
  q->add_option("--fresh-pred", fresh_pred, "fresh predicate name for rs");
  add_schedule_flags(q);

  CLI::App* c = app.add_subcommand("compare", "run all methods and the theorem checks");
  c->add_option("kb", kb_path, "knowledge base file")->required();
  c->add_option("--query", query_text, "closed formula to evaluate")->required();
  c->add_option("--tolerance", tolerance, "allowed gap between methods");
  c->add_option("--format", format, "json | table")->check(CLI::IsMember({"json", "table"}));
  add_schedule_flags(c);

  CLI::App* o = app.add_subcommand("oracle", "class engine vs explicit world enumeration");
  o->add_option("--max-n", oracle_max_n, "largest domain size");
  o->add_option("--max-preds", oracle_max_preds, "largest predicate count");
  o->add_option("--max-consts", oracle_max_consts, "largest constant count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  const auto t0 = std::chrono::steady_clock::now();
  auto wall_ms = [&t0] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  try {
    if (o->parsed()) {
      doxa::OracleReport rep;
      try {
        rep = doxa::run_world_oracle(oracle_max_n, oracle_max_preds, oracle_max_consts);
      } catch (const doxa::OracleTooLarge& e) {
        emit(std::string("FAIL: ") + e.what() + "\n");
        return 2;
      }
      if (rep.pass()) {
        emit("PASS: " + std::to_string(rep.cases) + " oracle cases agree\n");
        return 0;
      }
      emit("FAIL: " + std::to_string(rep.failures) + " of " + std::to_string(rep.cases) +
           " cases disagree\nfirst: " + rep.first_failure + "\n");
      return 2;
    }

    const std::string kb_text = read_file(kb_path);
    const doxa::KnowledgeBase kb = doxa::parse_knowledge_base(kb_text);
    const doxa::Formula query = parse_query(query_text, kb);
    const doxa::SweepSchedule schedule = sf.resolve();

    if (c->parsed()) {
      const doxa::MethodComparison cmp =
          doxa::compare_methods(query, kb, schedule, tolerance);
      if (format == "json")
        emit(doxa::comparison_json(kb_text, query_text, cmp, schedule, wall_ms()).dump(2) + "\n");
      else
        emit(comparison_table(cmp));
      return cmp.all_pass() ? 0 : 2;
    }

    // query subcommand
    doxa::MethodResult result;
    std::optional<std::pair<int, doxa::Rational>> at;
    if (!at_point.empty()) {
      const auto comma = at_point.find(',');
      if (comma == std::string::npos) throw doxa::Error("--at expects N,TAU");
      at = {std::stoi(at_point.substr(0, comma)),
            parse_rational_flag(at_point.substr(comma + 1))};
    }

    if (method == "rw") {
      result.method = "rw";
      if (!kb.objective()) {
        result.reason = doxa::Reason::Inapplicable;
        result.note = "conditioning needs an objective knowledge base";
      } else if (at) {
        const doxa::FinitePoint p =
            doxa::degree_of_belief_at(query, kb, at->first, at->second, schedule.engine);
        result.value = p.value;
        result.vacuous = p.vacuous;
        result.points = {p};
      } else {
        doxa::BeliefValue bv = doxa::degree_of_belief_limit(query, kb, schedule);
        result.value = bv.value;
        result.reason = bv.reason;
        result.vacuous = bv.vacuous;
        result.points = std::move(bv.points);
      }
    } else if (method == "me") {
      result = doxa::me_process(query, kb);
    } else if (method == "cew") {
      result = at ? doxa::cew(doxa::finite_rw_process(at->first, at->second, schedule.engine),
                              query, kb)
                  : doxa::cew_limit(query, kb, schedule);
    } else if (method == "cef") {
      if (no_sweep) {
        result = doxa::cef(doxa::rw_limit_process(schedule), query, kb);
        result.method = "cef-on-limit";
      } else if (at) {
        result = doxa::cef(doxa::finite_rw_process(at->first, at->second, schedule.engine), query,
                           kb);
      } else {
        result = doxa::cef_limit(query, kb, schedule);
      }
    } else if (method == "rs") {
      result = at ? doxa::rs(doxa::finite_rw_process(at->first, at->second, schedule.engine),
                             query, kb, fresh_pred)
                  : doxa::rs_limit(query, kb, schedule, fresh_pred);
    }

    if (format == "json")
      emit(doxa::query_report_json(kb_text, query_text, result, schedule, wall_ms()).dump(2) +
           "\n");
    else
      emit(method_table(result));
    return result.defined() ? 0 : 2;
  } catch (const doxa::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const doxa::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
