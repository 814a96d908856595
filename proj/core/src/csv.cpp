#include "hypersens/csv.hpp"

#include <charconv>
#include <cmath>

namespace hypersens {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header) : out_(out) {
  bool first = true;
  for (auto h : header) {
    separator(first);
    out_ << h;
  }
  out_ << '\n';
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> sweep) {
  CsvWriter csv(out, {"phi", "delta_I", "delta_H", "R"});
  for (const auto& s : sweep) csv.row(s.phi, s.delta_I, s.delta_H, s.groups);
}

void write_histogram_csv(std::ostream& out, const AngleHistogram& histogram) {
  CsvWriter csv(out, {"bin_lo", "bin_hi", "count", "density"});
  for (std::size_t b = 0; b < histogram.counts.size(); ++b) {
    csv.row(histogram.edges[b], histogram.edges[b + 1], histogram.counts[b], histogram.density[b]);
  }
}

void write_groups_csv(std::ostream& out, const Grouping& grouping, const GroupStatistics& stats) {
  CsvWriter csv(out, {"group", "seed_index", "N_r", "p_r", "H_r"});
  for (std::size_t r = 0; r < grouping.groups.size(); ++r) {
    const auto& g = grouping.groups[r];
    csv.row(r, g.seed, g.members.size(), g.probability, stats.group_entropies.at(r));
  }
}

void write_tradeoff_csv(std::ostream& out, std::span<const TradeoffPoint> curve) {
  CsvWriter csv(out, {"delta_H_tol", "delta_I_min", "phi"});
  for (const auto& p : curve) csv.row(p.delta_H_tol, p.delta_I_min, p.phi);
}

void write_theory_csv(std::ostream& out, std::span<const TheoryRow> rows) {
  CsvWriter csv(out, {"phi", "g", "delta_H_tol", "delta_I_tilde", "slope"});
  for (const auto& r : rows) csv.row(r.phi, r.g, r.delta_H_tol, r.delta_I_tilde, r.slope);
}

void write_classical_csv(std::ostream& out, std::span<const ClassicalRow> rows) {
  CsvWriter csv(out, {"t", "R", "delta_H_S", "delta_I_min", "ratio", "valid"});
  for (const auto& r : rows) csv.row(r.t, r.R, r.delta_H_S, r.delta_I_min, r.ratio, r.valid);
}

void write_history_csv(std::ostream& out, const VectorEnsemble& ensemble) {
  CsvWriter csv(out, {"history", "labels", "probability"});
  for (Index j = 0; j < ensemble.size(); ++j) {
    const auto h = ensemble.history(j);
    std::string labels;
    labels.reserve(h.labels.size());
    for (int l : h.labels) labels.push_back(l > 0 ? '+' : '-');
    csv.row(j, std::string_view(labels), h.probability);
  }
}

}  // namespace hypersens
