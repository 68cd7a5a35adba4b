#pragma once

// Text formats: segment, site and permutation files, and the CSV outputs.
//
//   segments     id x1 y1 x2 y2
//   sites        id x y
//   permutation  one id per line, first inserted first
//
// Numbers are integers or finite decimals; '#' starts a comment line.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ric/delaunay.hpp"
#include "ric/events.hpp"
#include "ric/geometry.hpp"
#include "ric/trapezoidation.hpp"
#include "ric/verifier.hpp"

namespace ric {

std::vector<Segment> parse_segments(std::istream& in);
std::vector<Site> parse_sites(std::istream& in);
std::vector<int> parse_permutation(std::istream& in);

std::vector<Segment> read_segments_file(const std::string& path);
std::vector<Site> read_sites_file(const std::string& path);
std::vector<int> read_permutation_file(const std::string& path);

/// Maps ids to positions; throws Parse unless `ids` is a permutation of `all_ids`.
std::vector<std::size_t> permutation_indices(std::span<const int> all_ids, std::span<const int> ids);

/// Exact decimal rendering; throws InvalidArgument if the expansion is infinite.
std::string to_decimal(const Rational& q);

void write_segments(std::ostream& out, std::span<const Segment> segments);
void write_sites(std::ostream& out, std::span<const Site> sites);
void write_permutation(std::ostream& out, std::span<const int> ids);

/// step,faces,size_nodes,max_depth,Dj,Ej,Oj,Cj,nodes_created[,search_depth]
/// search_depth is left empty past the computed prefix.
void write_trajectory_csv(std::ostream& out, std::span<const StepStats> trajectory,
                          std::optional<std::span<const int>> search_depths = std::nullopt);
/// step,Dj,flips,weighted_depth,size_triangles
void write_delaunay_csv(std::ostream& out, std::span<const DelaunayStepStats> trajectory);
/// T,empirical_ccdf,envelope,trials (envelope clamped to 1)
void write_tail_csv(std::ostream& out, const TailResult& tail);
/// i,j,bit over all i < j
void write_events_csv(std::ostream& out, const EventMatrix& X);
/// attempt,size,depth,accepted
void write_verifier_csv(std::ostream& out, const VerifierReport& report);
/// Plain-text oracle report, one line per check.
void write_oracle_report(std::ostream& out, const OracleReport& report);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Parses comma-separated text with a header line; throws Parse on ragged rows.
CsvTable read_csv(std::istream& in);

}  // namespace ric
