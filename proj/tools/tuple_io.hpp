#pragma once

// JSON encoding of tuples and reports. Complex numbers are [re, im] pairs.

#include "json.hpp"
#include "rowdil/dilation.hpp"
#include "rowdil/equivalence.hpp"
#include "rowdil/ideal.hpp"
#include "rowdil/structure.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace rowdil::io {

using json = nlohmann::json;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const RowContraction& t) {
  json mats = json::array();
  for (const auto& a : t.matrices()) mats.push_back(to_json(a));
  return {{"n", t.n()}, {"d", t.d()}, {"matrices", std::move(mats)}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

[[noreturn]] inline void malformed(const std::string& what) { throw Error(ErrorKind::MalformedInput, what); }

inline double number(const json& j, const char* where) {
  if (!j.is_number()) malformed(std::string("expected a number in ") + where);
  return j.get<double>();
}

inline Mat matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) malformed("matrix has the wrong number of rows");
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) malformed("ragged matrix row");
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto& z = row[static_cast<std::size_t>(k)];
      if (!z.is_array() || z.size() != 2) malformed("matrix entries must be [re, im] pairs");
      m(i, k) = cplx(number(z[0], "entry"), number(z[1], "entry"));
    }
  }
  return m;
}

inline RowContraction tuple_from_json(const json& j) {
  if (!j.is_object()) malformed("tuple file must hold a JSON object");
  for (const char* key : {"n", "d", "matrices"})
    if (!j.contains(key)) malformed(std::string("missing field '") + key + "'");
  if (!j["n"].is_number_integer() || !j["d"].is_number_integer()) malformed("n and d must be integers");
  const long long n = j["n"].get<long long>(), d = j["d"].get<long long>();
  if (n < 1 || d < 1) malformed("n and d must be positive");
  const auto& mats = j["matrices"];
  if (!mats.is_array() || static_cast<long long>(mats.size()) != n)
    malformed("expected exactly n = " + std::to_string(n) + " matrices");
  std::vector<Mat> out;
  for (const auto& m : mats) out.push_back(matrix_from_json(m, d, d));
  return RowContraction(std::move(out));
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(e.what());
  }
}

inline RowContraction read_tuple(const std::string& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return tuple_from_json(parse(ss.str()));
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) malformed("cannot write " + path);
  out << text;
}

inline json blocks_json(const std::vector<BlockSummary>& blocks) {
  json b = json::array();
  for (const auto& s : blocks) b.push_back({{"d", s.d}, {"m", s.m}});
  return b;
}

inline json to_json(const StructureReport& r) {
  return {{"pure_rank", r.pure_rank},
          {"alpha", r.alpha},
          {"is_pure", r.is_pure},
          {"is_cuntz", r.is_cuntz},
          {"irreducibility", irreducibility_name(r.irreducibility)},
          {"blocks", blocks_json(r.blocks)},
          {"dim_Vc", r.dim_Vc},
          {"dim_tildeV", r.dim_tildeV},
          {"basis_tildeV", to_json(r.basis_tildeV)}};
}

inline json to_json(const ComparisonReport& r) {
  json pairs = json::array();
  for (const auto& p : r.matching) pairs.push_back({{"a", p.a_block}, {"b", p.b_block}, {"u", to_json(p.u)}});
  json j = {{"mode", r.mode},
            {"verdict", r.verdict},
            {"undecided", r.undecided},
            {"pure_rank_a", r.pure_rank_a},
            {"pure_rank_b", r.pure_rank_b},
            {"blocks_a", blocks_json(r.blocks_a)},
            {"blocks_b", blocks_json(r.blocks_b)},
            {"blocks_match", r.blocks_match},
            {"matching", std::move(pairs)},
            {"witness", r.witness ? to_json(*r.witness) : json(nullptr)}};
  if (r.witness) j["witness_residual"] = r.witness_residual;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline json to_json(const CheckReport& c) {
  return {{"isometry_residual", c.isometry_residual},
          {"orthogonality_residual", c.orthogonality_residual},
          {"coinvariance_residual", c.coinvariance_residual},
          {"minimality_rank", c.minimality_rank},
          {"interior_dim", c.interior_dim}};
}

// S matrices in the tuple layout, plus level and defect dimension.
inline json dilation_json(const TruncatedDilation& dil) {
  json mats = json::array();
  for (const auto& s : dil.S) mats.push_back(to_json(s));
  return {{"n", dil.n},
          {"d", static_cast<long long>(dil.ambient_dim)},
          {"matrices", std::move(mats)},
          {"level", dil.level},
          {"defect_dim", dil.defect_dim}};
}

inline json to_json(const GeneratorTable& tab) {
  json coeffs = json::object();
  for (const auto& [w, c] : tab.coeffs) coeffs[word_string(w)] = to_json(c);
  return {{"coefficients", std::move(coeffs)}, {"level_energy", tab.level_energy}, {"tail_bound", tab.tail_bound}};
}

}  // namespace rowdil::io
