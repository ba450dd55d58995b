#pragma once

// Differential testing of the three semantics on generated typed programs:
// big-step PCF, big-step EPCF, and the compiled machine. Each case gets a
// fresh address table. Machine runs get fuel * multiplier steps; when some
// engines terminate and others time out, the timed-out engines are retried
// once at 10x before the case is classified.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "eam/eval.hpp"
#include "eam/frontend.hpp"
#include "eam/generate.hpp"
#include "eam/run.hpp"
#include "eam/syntax.hpp"
#include "eam/table.hpp"
#include "eam/translate.hpp"
#include "eam/util.hpp"

namespace eam {

struct DiffOutcome {
  enum class Kind { Num, Timeout, Fault };
  Kind kind = Kind::Timeout;
  std::uint64_t n = 0;
  std::string detail;

  static DiffOutcome num(std::uint64_t v) { return DiffOutcome{Kind::Num, v, {}}; }
  static DiffOutcome timeout() { return DiffOutcome{Kind::Timeout, 0, {}}; }
  static DiffOutcome fault(std::string d) { return DiffOutcome{Kind::Fault, 0, std::move(d)}; }

  std::string show() const {
    switch (kind) {
      case Kind::Num: return std::to_string(n);
      case Kind::Timeout: return "timeout";
      case Kind::Fault: return "fault:" + detail;
    }
    return "?";
  }
};

struct DiffCase {
  std::uint64_t index = 0;
  std::string program;
  DiffOutcome pcf, epcf, eam;
  std::string verdict;
};

struct DiffReport {
  std::uint64_t ok = 0;        // agree on a numeral
  std::uint64_t timeout = 0;   // agree-with-timeouts
  std::uint64_t disagree = 0;
  std::uint64_t fault = 0;
  std::uint64_t count = 0;
  std::vector<DiffCase> cases;  // filled when keep_cases

  std::string summary() const {
    return "TOTAL ok=" + std::to_string(ok) + " timeout=" + std::to_string(timeout) +
           " disagree=" + std::to_string(disagree) + " fault=" + std::to_string(fault);
  }
};

namespace detail {

inline DiffOutcome outcome_of_eval(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::Value:
      if (o.value.is_numeral()) return DiffOutcome::num(*o.value.numeral);
      return DiffOutcome::fault("non-numeral value for a program of type int");
    case Outcome::Kind::Timeout:
      return DiffOutcome::timeout();
    case Outcome::Kind::Fault:
      return DiffOutcome::fault(o.fault);
  }
  return DiffOutcome::fault("?");
}

inline DiffOutcome run_eam_case(const TermPtr& t, std::uint64_t fuel, std::uint64_t max_cells,
                                std::uint64_t max_work) {
  AddressTable table;
  Address a = compile_program(table, t);
  RunOptions opt;
  opt.detect_cycles = true;
  opt.max_new_cells = max_cells;
  opt.max_work = max_work;
  RunResult r = run(table, table.lookup(a), fuel, opt);
  switch (r.status) {
    case RunResult::Status::Final: {
      if (auto n = numeral_shape(r.machine)) return DiffOutcome::num(*n);
      return DiffOutcome::fault("machine reached a non-numeral final state");
    }
    case RunResult::Status::Error:
      return DiffOutcome::fault("err");
    case RunResult::Status::Timeout:
      return DiffOutcome::timeout();
  }
  return DiffOutcome::fault("?");
}

}  // namespace detail

inline DiffReport difftest(const GenConfig& cfg, std::uint64_t count, std::uint64_t fuel,
                           std::uint64_t eam_multiplier = 50, std::ostream* sink = nullptr,
                           bool keep_cases = false) {
  DiffReport report;
  report.count = count;
  const std::uint64_t max_cells = 1u << 21;
  const std::uint64_t max_work = 2'000'000;  // bounds table traffic of deep forcing chains

  for (std::uint64_t i = 0; i < count; ++i) {
    GenConfig c = cfg;
    c.seed = splitmix64(cfg.seed ^ splitmix64(i + 1));
    TermPtr t = gen_typed_program(c);

    DiffCase dc;
    dc.index = i;
    dc.program = print_term(t);
    dc.pcf = detail::outcome_of_eval(eval_pcf(t, fuel));
    dc.epcf = detail::outcome_of_eval(eval_epcf(nullptr, t, fuel));
    dc.eam = detail::run_eam_case(t, fuel * eam_multiplier, max_cells, max_work);

    auto any_fault = [&] {
      return dc.pcf.kind == DiffOutcome::Kind::Fault || dc.epcf.kind == DiffOutcome::Kind::Fault ||
             dc.eam.kind == DiffOutcome::Kind::Fault;
    };
    auto timeouts = [&] {
      int n = 0;
      n += dc.pcf.kind == DiffOutcome::Kind::Timeout;
      n += dc.epcf.kind == DiffOutcome::Kind::Timeout;
      n += dc.eam.kind == DiffOutcome::Kind::Timeout;
      return n;
    };
    auto values_agree = [&] {
      std::vector<std::uint64_t> vals;
      if (dc.pcf.kind == DiffOutcome::Kind::Num) vals.push_back(dc.pcf.n);
      if (dc.epcf.kind == DiffOutcome::Kind::Num) vals.push_back(dc.epcf.n);
      if (dc.eam.kind == DiffOutcome::Kind::Num) vals.push_back(dc.eam.n);
      for (std::size_t k = 1; k < vals.size(); ++k)
        if (vals[k] != vals[0]) return false;
      return true;
    };

    if (!any_fault() && timeouts() > 0 && timeouts() < 3) {
      // fuel skew: retry the timed-out engines once, 10x
      if (dc.pcf.kind == DiffOutcome::Kind::Timeout)
        dc.pcf = detail::outcome_of_eval(eval_pcf(t, fuel * 10));
      if (dc.epcf.kind == DiffOutcome::Kind::Timeout)
        dc.epcf = detail::outcome_of_eval(eval_epcf(nullptr, t, fuel * 10));
      if (dc.eam.kind == DiffOutcome::Kind::Timeout)
        dc.eam = detail::run_eam_case(t, fuel * eam_multiplier * 10, max_cells * 4, max_work * 10);
    }

    if (any_fault()) {
      dc.verdict = "FAULT";
      report.fault++;
    } else if (!values_agree()) {
      dc.verdict = "DISAGREE";
      report.disagree++;
    } else if (timeouts() > 0) {
      dc.verdict = "agree-with-timeouts";
      report.timeout++;
    } else {
      dc.verdict = "agree";
      report.ok++;
    }

    if (sink)
      (*sink) << "case " << i << " | pcf=" << dc.pcf.show() << " | epcf=" << dc.epcf.show()
              << " | eam=" << dc.eam.show() << " | " << dc.verdict << " | " << dc.program << "\n";
    if (keep_cases) report.cases.push_back(std::move(dc));
  }
  if (sink) (*sink) << report.summary() << "\n";
  return report;
}

}  // namespace eam
