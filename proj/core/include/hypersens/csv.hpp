#pragma once

// Plot-ready CSV emitters. Numbers use the shortest decimal form that round-trips,
// so identical inputs give byte-identical files.

#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>

#include "hypersens/classical_model.hpp"
#include "hypersens/grouping_analysis.hpp"
#include "hypersens/random_vector_theory.hpp"

namespace hypersens {

std::string format_number(double value);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);

  template <class... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((emit(fields, first)), ...);
    out_ << '\n';
  }

 private:
  void separator(bool& first) {
    if (!first) out_ << ',';
    first = false;
  }
  void emit(double v, bool& first) { separator(first); out_ << format_number(v); }
  void emit(bool v, bool& first) { separator(first); out_ << (v ? 1 : 0); }
  void emit(std::string_view v, bool& first) { separator(first); out_ << v; }
  template <class Int>
    requires std::is_integral_v<Int>
  void emit(Int v, bool& first) {
    separator(first);
    out_ << v;
  }

  std::ostream& out_;
};

/// phi,delta_I,delta_H,R
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> sweep);
/// bin_lo,bin_hi,count,density
void write_histogram_csv(std::ostream& out, const AngleHistogram& histogram);
/// group,seed_index,N_r,p_r,H_r
void write_groups_csv(std::ostream& out, const Grouping& grouping, const GroupStatistics& stats);
/// delta_H_tol,delta_I_min,phi
void write_tradeoff_csv(std::ostream& out, std::span<const TradeoffPoint> curve);
/// phi,g,delta_H_tol,delta_I_tilde,slope
void write_theory_csv(std::ostream& out, std::span<const TheoryRow> rows);
/// t,R,delta_H_S,delta_I_min,ratio,valid
void write_classical_csv(std::ostream& out, std::span<const ClassicalRow> rows);
/// history,labels,probability with labels written as a string of '-' and '+'
void write_history_csv(std::ostream& out, const VectorEnsemble& ensemble);

}  // namespace hypersens
