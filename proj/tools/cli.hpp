#pragma once

#include "CLI11.hpp"
#include "tuple_io.hpp"

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

namespace rowdil::cli {

enum Exit : int {
  kOk = 0,
  kNotEquivalent = 1,
  kUndecided = 2,
  kMalformed = 64,
  kNotContractive = 65,
  kNotApplicable = 66,
  kInternal = 70,
};

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::MalformedInput:
    case ErrorKind::BadWord:
    case ErrorKind::NotUnit:
    case ErrorKind::DimensionMismatch:
      return kMalformed;
    case ErrorKind::NotContractive:
    case ErrorKind::NotStrictlyContractive:
    case ErrorKind::MixedNotConvergent:
      return kNotContractive;
    case ErrorKind::NotIrreducible:
    case ErrorKind::NotApplicable:
      return kNotApplicable;
    case ErrorKind::Undecided:
      return kUndecided;
    default:
      return kInternal;
  }
}

namespace detail {

using io::json;

inline json similarity_json(const SimilarityResult& s) {
  json j = {{"similar", s.similar}, {"condition", s.condition}, {"intertwiner_dim", s.intertwiner_dim}};
  j["t"] = s.t ? io::to_json(*s.t) : json(nullptr);
  return j;
}

inline json ideal_json(const IdealTestResult& r) {
  return {{"similar", r.similar},
          {"max_residual", r.max_residual},
          {"tolerance", r.tolerance},
          {"generators", r.generators},
          {"outside_hypotheses", r.outside_hypotheses}};
}

inline bool strict(const RowContraction& t) {
  return spectral_radius(transfer_matrix(t).matrix) < 1.0 - kStrictMargin;
}

inline int compare_similar(const RowContraction& a, const RowContraction& b, const ToleranceConfig& cfg,
                           std::ostream& out) {
  json j = {{"mode", "similar"}, {"verdict", false}, {"undecided", false}};
  if (a.n() != b.n() || a.d() != b.d()) {
    j["note"] = "tuples differ in n or d";
    out << io::dump(j);
    return kNotEquivalent;
  }
  if (!burnside_irreducible(a.matrices(), a.d(), cfg.rank_rtol))
    throw Error(ErrorKind::NotIrreducible, "first tuple does not generate the full matrix algebra");

  std::optional<bool> direct;
  try {
    auto s = similar_direct(a, b, cfg);
    direct = s.similar;
    j["direct"] = similarity_json(s);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Undecided) throw;
    j["direct"] = {{"undecided", true}, {"message", e.what()}};
  }
  std::optional<bool> ideal;
  if (strict(a) && strict(b)) {
    auto r = similarity_test_ideal(a, b, cfg);
    ideal = r.similar;
    j["ideal"] = ideal_json(r);
  } else {
    j["note"] = "ideal test skipped: a transfer map has spectral radius 1";
  }
  // an undecided or disputed direct search is reported as undecided
  int code = kUndecided;
  if (direct && (!ideal || *ideal == *direct)) code = *direct ? kOk : kNotEquivalent;
  j["verdict"] = code == kOk;
  j["undecided"] = code == kUndecided;
  out << io::dump(j);
  return code;
}

inline int run_compare(const std::string& pa, const std::string& pb, const std::string& mode,
                       const ToleranceConfig& cfg, std::ostream& out) {
  auto a = io::read_tuple(pa), b = io::read_tuple(pb);
  validate(a, cfg);
  validate(b, cfg);
  if (mode == "unitary") {
    auto r = compare_unitary(a, b, cfg);
    out << io::dump(io::to_json(r));
    return r.verdict ? kOk : kNotEquivalent;
  }
  if (mode == "similar") return compare_similar(a, b, cfg, out);
  bool v = friedland_five(a, b, cfg.rank_rtol);
  out << io::dump({{"mode", "friedland"}, {"verdict", v}, {"undecided", false}});
  return v ? kOk : kNotEquivalent;
}

inline int run_analyze(const std::string& path, const ToleranceConfig& cfg, std::ostream& out) {
  auto t = io::read_tuple(path);
  out << io::dump(io::to_json(structure_report(t, cfg)));
  return kOk;
}

inline int run_dilate(const std::string& path, int level, bool check, const std::string& out_path,
                      const ToleranceConfig& cfg, std::ostream& out) {
  auto t = io::read_tuple(path);
  validate(t, cfg);
  auto dil = build_dilation(t, level, cfg);
  json j = {{"level", dil.level},
            {"defect_dim", dil.defect_dim},
            {"ambient_dim", static_cast<long long>(dil.ambient_dim)},
            {"interior_dim", static_cast<long long>(dil.interior_dim)},
            {"pure_rank", pure_rank(t, cfg)}};
  if (check) {
    j["check"] = io::to_json(verify_dilation(dil, cfg));
    j["level_one_wandering_dim"] = level_one_wandering_dim(t, cfg);
  }
  if (!out_path.empty()) {
    io::write_text(out_path, io::dump(io::dilation_json(dil)));
    j["written"] = out_path;
  }
  out << io::dump(j);
  return kOk;
}

struct IdealFlags {
  bool gram = false;
  bool representatives = false;
  int generators = -1;  // 0 picks N automatically
  std::string test;
};

inline int run_ideal(const std::string& path, const IdealFlags& f, const ToleranceConfig& cfg, std::ostream& out) {
  auto t = io::read_tuple(path);
  validate(t, cfg);
  auto model = coinvariant_model(t, cfg);
  json j = {{"n", t.n()}, {"d", t.d()}, {"gram_rank", static_cast<long long>(model.ortho_basis.cols())}};
  if (f.gram) j["gram"] = io::to_json(model.gram.G);
  if (f.representatives) {
    auto reps = extract_pure_rank_one(model, cfg);
    json rs = json::array();
    for (const auto& b : reps) rs.push_back(io::to_json(b));
    j["representatives"] = std::move(rs);
    auto rec = cstar_convex_reconstruct(t, reps, cfg);
    j["reconstruction"] = {{"weights", rec.weights},
                           {"residual", rec.residual},
                           {"isometry_residual", rec.isometry_residual}};
  }
  if (f.generators >= 0) {
    auto pg = polynomial_generators(t, f.generators, cfg);
    json tabs = json::array();
    for (const auto& tab : pg.tables) tabs.push_back(io::to_json(tab));
    j["generators"] = {{"N", pg.N}, {"epsilon", pg.epsilon}, {"tables", std::move(tabs)}};
  }
  if (!f.test.empty()) {
    auto b = io::read_tuple(f.test);
    validate(b, cfg);
    j["test"] = ideal_json(similarity_test_ideal(t, b, cfg));
  }
  out << io::dump(j);
  return kOk;
}

struct GenFlags {
  std::string kind;
  std::string word = "1";
  double lambda_re = 1.0;
  double lambda_im = 0.0;
  int n = 0;
  int d = 2;
  double norm = 0.9;
  std::vector<double> eta;
  std::string out;
};

inline RowContraction generate(const GenFlags& g, std::uint64_t seed) {
  if (g.kind == "paper-7") {
    Mat a1(2, 2), a2(2, 2);
    a1 << 0, 0.5, 0.5, 0;
    a2 << 0.5, 0, 0, 0;
    return RowContraction({a1, a2});
  }
  if (g.kind == "atomic") {
    auto w = parse_word(g.word);
    int n = g.n > 0 ? g.n : *std::max_element(w.begin(), w.end());
    return make_atomic(w, cplx(g.lambda_re, g.lambda_im), n);
  }
  if (g.kind == "cuntz-state") {
    Vec eta(static_cast<Eigen::Index>(g.eta.size()));
    for (std::size_t i = 0; i < g.eta.size(); ++i) eta(static_cast<Eigen::Index>(i)) = g.eta[i];
    return make_cuntz_state(eta);
  }
  return random_contraction(g.n > 0 ? g.n : 2, g.d, g.norm, seed);
}

}  // namespace detail

// argv-style entry point; args exclude the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dilation invariants and similarity tests for row contractions", "rowdil"};
  app.require_subcommand(1);
  ToleranceConfig cfg;
  int level = 3;
  app.add_option("--tol", cfg.rank_rtol, "relative rank cutoff");
  app.add_option("--seed", cfg.seed, "seed for randomized searches and generators");
  app.add_option("--level", level, "dilation truncation level");

  std::string path, path_b, mode = "unitary";
  auto* analyze = app.add_subcommand("analyze", "structure report of a tuple");
  analyze->add_option("file", path)->required();

  auto* compare = app.add_subcommand("compare", "compare two tuples");
  compare->add_option("a", path)->required();
  compare->add_option("b", path_b)->required();
  compare->add_option("--mode", mode)->check(CLI::IsMember({"unitary", "similar", "friedland"}));

  bool check = false;
  std::string out_path;
  auto* dilate = app.add_subcommand("dilate", "truncated minimal isometric dilation");
  dilate->add_option("file", path)->required();
  dilate->add_flag("--check", check);
  dilate->add_option("--out", out_path);

  detail::IdealFlags idf;
  auto* ideal = app.add_subcommand("ideal", "kernel-ideal model of a strict contraction");
  ideal->add_option("file", path)->required();
  ideal->add_flag("--gram", idf.gram);
  ideal->add_flag("--representatives", idf.representatives);
  ideal->add_option("--generators", idf.generators, "truncation length, 0 for automatic");
  ideal->add_option("--test", idf.test, "tuple to test for similarity");

  detail::GenFlags gf;
  auto* gen = app.add_subcommand("gen", "emit a tuple file");
  gen->add_option("kind", gf.kind)->required()->check(CLI::IsMember({"atomic", "cuntz-state", "random", "paper-7"}));
  gen->add_option("--word", gf.word);
  gen->add_option("--lambda", gf.lambda_re);
  gen->add_option("--lambda-im", gf.lambda_im);
  gen->add_option("--n", gf.n);
  gen->add_option("--d", gf.d);
  gen->add_option("--norm", gf.norm);
  gen->add_option("--eta", gf.eta)->delimiter(',');
  gen->add_option("--out", gf.out);

  for (auto* sub : {analyze, compare, dilate, ideal, gen}) sub->fallthrough();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kMalformed;
  }

  try {
    cfg.check();
    if (*analyze) return detail::run_analyze(path, cfg, out);
    if (*compare) return detail::run_compare(path, path_b, mode, cfg, out);
    if (*dilate) return detail::run_dilate(path, level, check, out_path, cfg, out);
    if (*ideal) return detail::run_ideal(path, idf, cfg, out);
    auto t = detail::generate(gf, cfg.seed);
    const std::string text = io::dump(io::to_json(t));
    if (gf.out.empty())
      out << text;
    else
      io::write_text(gf.out, text);
    return kOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace rowdil::cli
