#include "blockcoh/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "blockcoh/errors.hpp"

namespace blockcoh {
namespace {

using nlohmann::json;

std::size_t parse_size(const std::string& key, const std::string& token) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) throw ParseError("BFM header: expected '" + prefix + "'");
  const std::string v = token.substr(prefix.size());
  std::size_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || out == 0)
    throw ParseError("BFM header: bad value for " + key);
  return out;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw ParseError("cannot format number");
  return std::string(buf, p);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError("bad number '" + std::string(s) + "'");
  return v;
}

void write_bfm(std::ostream& out, const CMatrix& data, std::size_t r, Field field) {
  if (r == 0 || data.cols() % r != 0) throw DimensionError("column count must be a multiple of r");
  out << "BFM 1\n";
  out << "n=" << data.rows() << " r=" << r << " m=" << data.cols() / r << " field=" << to_string(field)
      << '\n';
  std::string line;
  for (std::size_t t = 0; t < data.rows(); ++t) {
    line.clear();
    const auto row = data.row(t);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += ',';
      line += format_double(row[c].real());
      line += ':';
      line += format_double(row[c].imag());
    }
    out << line << '\n';
  }
}

void write_bfm(std::ostream& out, const BlockFrame& a) { write_bfm(out, a.data(), a.r(), a.field()); }

BfmFile read_bfm(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "BFM 1") throw ParseError("not a BFM 1 file");
  if (!std::getline(in, line)) throw ParseError("BFM: missing header line");
  std::istringstream hs(line);
  std::string tn, tr, tm, tf, extra;
  if (!(hs >> tn >> tr >> tm >> tf) || (hs >> extra)) throw ParseError("BFM: malformed header line");
  const std::size_t n = parse_size("n", tn), r = parse_size("r", tr), m = parse_size("m", tm);
  if (tf.rfind("field=", 0) != 0) throw ParseError("BFM header: expected 'field='");
  BfmFile f;
  try {
    f.field = field_from_string(tf.substr(6));
  } catch (const Error&) {
    throw ParseError("BFM header: field must be real or complex");
  }
  f.r = r;
  const std::size_t cols = m * r;
  if (cols / r != m) throw ParseError("BFM header: dimensions overflow");
  std::vector<cplx> entries;
  entries.reserve(n * cols);
  for (std::size_t t = 0; t < n; ++t) {
    if (!std::getline(in, line)) throw ParseError("BFM: expected " + std::to_string(n) + " data rows");
    std::size_t pos = 0, count = 0;
    while (pos <= line.size()) {
      std::size_t end = line.find(',', pos);
      if (end == std::string::npos) end = line.size();
      const std::string_view tok(line.data() + pos, end - pos);
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos)
        throw ParseError("BFM row " + std::to_string(t + 1) + ": entry without ':'");
      const double re = parse_double(tok.substr(0, colon));
      const double im = parse_double(tok.substr(colon + 1));
      entries.emplace_back(re, im);
      ++count;
      pos = end + 1;
      if (end == line.size()) break;
    }
    if (count != cols)
      throw ParseError("BFM row " + std::to_string(t + 1) + ": expected " + std::to_string(cols) +
                       " entries, found " + std::to_string(count));
  }
  while (std::getline(in, line))
    if (!line.empty()) throw ParseError("BFM: trailing data after the last row");
  f.data = CMatrix(n, cols, std::move(entries));
  if (!f.data.all_finite()) throw ParseError("BFM: non-finite entry");
  if (f.field == Field::real && !f.data.is_real())
    throw ParseError("BFM: field=real but an imaginary part is nonzero");
  return f;
}

BfmFile read_bfm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_bfm(in);
}

void write_bfm_file(const std::string& path, const BlockFrame& a) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  write_bfm(out, a);
}

json to_json(const FrameValidation& v) {
  return json{{"shape_ok", v.shape_ok},
              {"regime_ok", v.regime_ok},
              {"field_consistent", v.field_consistent},
              {"unit_columns", v.unit_columns},
              {"block_orthonormal", v.block_orthonormal},
              {"is_tight", v.is_tight},
              {"is_union_of_orthobases", v.is_union_of_orthobases},
              {"equi_isoclinic", v.equi_isoclinic},
              {"max_column_defect", v.max_column_defect},
              {"max_block_defect", v.max_block_defect},
              {"tightness_defect", v.tightness_defect}};
}

json to_json(const CoherenceReport& rep, bool include_gram_map) {
  json j{{"n", rep.n},
         {"r", rep.r},
         {"m", rep.m},
         {"field", to_string(rep.field)},
         {"mu", rep.mu},
         {"nu", rep.nu},
         {"welch_block_lower", rep.welch_block_lower},
         {"orthobases_lower", optional_json(rep.orthobases_lower)},
         {"rankin_chordal", rep.rankin_chordal},
         {"spectral_distance_upper", rep.spectral_distance_upper},
         {"max_equiisoclinic", rep.max_equiisoclinic},
         {"max_blocks_orthobases",
          rep.max_blocks_orthobases ? json(*rep.max_blocks_orthobases) : json(nullptr)},
         {"is_union_of_orthobases", rep.is_union_of_orthobases},
         {"equi_isoclinic", rep.equi_isoclinic},
         {"mu_minus_welch", rep.mu - rep.welch_block_lower},
         {"validation", to_json(rep.validation)}};
  if (include_gram_map) j["gram_map"] = rep.gram_map.values;
  return j;
}

json bounds_json(const BoundInputs& b) {
  json j{{"m", b.m},
         {"n", b.n},
         {"r", b.r},
         {"field", to_string(b.field)},
         {"welch_block_lower", welch_block_lower(b)},
         {"rankin_chordal", rankin_chordal(b)},
         {"rankin_chordal_tight", rankin_chordal_tight(b.n, b.r)},
         {"spectral_distance_upper", spectral_distance_upper(b)},
         {"max_equiisoclinic", max_equiisoclinic(b.n, b.r, b.field)}};
  if (b.n % b.r == 0) {
    j["orthobases_lower"] = orthobases_lower(b.n, b.r);
    j["max_blocks_orthobases"] = max_blocks_orthobases(b.n, b.field);
  } else {
    j["orthobases_lower"] = nullptr;
    j["max_blocks_orthobases"] = nullptr;
  }
  return j;
}

json to_json(const ThresholdSolution& s) {
  return json{{"beta", s.beta}, {"a_hat", s.a_hat}, {"residual", s.residual}, {"log_gap", s.log_gap}};
}

json to_json(const FlipResult& f, bool include_steps) {
  json j{{"signs", f.signs},
         {"mu_before", f.mu_before},
         {"mu_after", f.mu_after},
         {"nu_before", f.nu_before},
         {"nu_after", f.nu_after},
         {"bound_lemma2", f.bound_lemma2},
         {"gram_preserved", f.gram_preserved},
         {"within_lemma2", f.within_lemma2},
         {"final_sum_norm", f.final_sum_norm}};
  if (include_steps) {
    json steps = json::array();
    for (const auto& s : f.steps) steps.push_back({{"plus", s.plus}, {"minus", s.minus}, {"sign", s.sign}});
    j["steps"] = steps;
  }
  return j;
}

json to_json(const FlipTableRow& row) {
  return json{{"r", row.r},
              {"realizations", row.realizations},
              {"mean_before", row.mean_before},
              {"mean_after", row.mean_after},
              {"improvement_pct", row.improvement_pct},
              {"bound_lemma2", row.bound_lemma2},
              {"decreased", row.decreased},
              {"within_bound", row.within_bound},
              {"gram_preserved", row.gram_preserved},
              {"before", row.before},
              {"after", row.after},
              {"mu", row.mu}};
}

json to_json(const MuCurveRow& row) {
  return json{{"beta", row.beta},       {"r", row.r},          {"m", row.m},
              {"mean_mu", row.mean_mu}, {"max_mu", row.max_mu}, {"theory_mu", row.theory_mu}};
}

json to_json(const NdpRow& row) {
  return json{{"label", row.label},       {"k", row.k},           {"dynamic_range", row.dynamic_range},
              {"mean_ndp", row.mean_ndp}, {"stderr", row.stderr_ndp}, {"trials", row.trials}};
}

void write_gram_map_csv(std::ostream& out, const GramMap& g) {
  std::string line;
  for (std::size_t i = 0; i < g.m; ++i) {
    line.clear();
    for (std::size_t j = 0; j < g.m; ++j) {
      if (j) line += ',';
      line += format_double(g(i, j));
    }
    out << line << '\n';
  }
}

void write_mu_curve_csv(std::ostream& out, const std::vector<MuCurveRow>& rows) {
  out << "beta,mean_mu,max_mu,theory_mu\n";
  for (const auto& r : rows)
    out << format_double(r.beta) << ',' << format_double(r.mean_mu) << ',' << format_double(r.max_mu)
        << ',' << format_double(r.theory_mu) << '\n';
}

void write_threshold_csv(std::ostream& out, const std::vector<ThresholdSolution>& rows) {
  out << "beta,a_hat,residual\n";
  for (const auto& r : rows)
    out << format_double(r.beta) << ',' << format_double(r.a_hat) << ',' << format_double(r.residual)
        << '\n';
}

void write_ndp_csv(std::ostream& out, const std::vector<NdpRow>& rows) {
  out << "label,k,dynamic_range,mean_ndp,stderr,trials\n";
  for (const auto& r : rows)
    out << r.label << ',' << r.k << ',' << format_double(r.dynamic_range) << ','
        << format_double(r.mean_ndp) << ',' << format_double(r.stderr_ndp) << ',' << r.trials << '\n';
}

void write_flip_table_csv(std::ostream& out, const std::vector<FlipTableRow>& rows) {
  out << "r,realizations,mean_before,mean_after,improvement_pct,bound_lemma2,decreased,within_bound\n";
  for (const auto& r : rows)
    out << r.r << ',' << r.realizations << ',' << format_double(r.mean_before) << ','
        << format_double(r.mean_after) << ',' << format_double(r.improvement_pct) << ','
        << format_double(r.bound_lemma2) << ',' << r.decreased << ',' << r.within_bound << '\n';
}

}  // namespace blockcoh
