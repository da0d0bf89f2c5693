#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "blockcoh/blockcs.hpp"
#include "blockcoh/blockframe.hpp"
#include "blockcoh/bounds.hpp"
#include "blockcoh/flipping.hpp"
#include "blockcoh/randomgrass.hpp"

namespace blockcoh {

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);
/// Strict parse of a whole token; throws ParseError.
double parse_double(std::string_view s);

/// BFM text frame: "BFM 1", "n= r= m= field=", then n rows of m r "re:im" entries.
struct BfmFile {
  CMatrix data;
  std::size_t r = 1;
  Field field = Field::complex;
};

void write_bfm(std::ostream& out, const CMatrix& data, std::size_t r, Field field);
void write_bfm(std::ostream& out, const BlockFrame& a);
BfmFile read_bfm(std::istream& in);
BfmFile read_bfm_file(const std::string& path);
void write_bfm_file(const std::string& path, const BlockFrame& a);

nlohmann::json to_json(const FrameValidation& v);
/// The gram map is large for big m; it goes to CSV unless asked for here.
nlohmann::json to_json(const CoherenceReport& rep, bool include_gram_map = false);
nlohmann::json bounds_json(const BoundInputs& b);
nlohmann::json to_json(const ThresholdSolution& s);
nlohmann::json to_json(const FlipResult& f, bool include_steps = false);
nlohmann::json to_json(const FlipTableRow& row);
nlohmann::json to_json(const MuCurveRow& row);
nlohmann::json to_json(const NdpRow& row);

void write_gram_map_csv(std::ostream& out, const GramMap& g);
void write_mu_curve_csv(std::ostream& out, const std::vector<MuCurveRow>& rows);
void write_threshold_csv(std::ostream& out, const std::vector<ThresholdSolution>& rows);
void write_ndp_csv(std::ostream& out, const std::vector<NdpRow>& rows);
void write_flip_table_csv(std::ostream& out, const std::vector<FlipTableRow>& rows);

}  // namespace blockcoh
