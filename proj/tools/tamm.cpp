#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tamm/analysis.hpp"
#include "tamm/engine.hpp"
#include "tamm/generate.hpp"
#include "tamm/io.hpp"
#include "tamm/ops.hpp"
#include "tamm/strassen.hpp"
#include "tamm/ta25b.hpp"
#include "tamm/verify.hpp"

namespace {

using nlohmann::json;
using namespace tamm;

constexpr int kExitVerifyFailed = 4;

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::degenerate_parameter: return "degenerate_parameter";
    case Errc::domain: return "domain";
    case Errc::parse: return "parse";
    case Errc::verification: return "verification";
    case Errc::budget_exceeded: return "budget_exceeded";
    case Errc::io: return "io";
    case Errc::internal: return "internal";
  }
  return "internal";
}

int exit_code_for(Errc c) { return c == Errc::verification ? kExitVerifyFailed : 3; }

int threads_from_env() {
  const char* s = std::getenv("TAMM_THREADS");
  if (!s || !*s) return 1;
  int v = std::atoi(s);
  return v < 1 ? 1 : v;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Summary goes to stdout unless the algorithm itself is streaming there.
std::ostream& info(const std::string& out_path) {
  return out_path.empty() ? std::cerr : std::cout;
}

void emit_algorithm(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

void emit_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

std::string describe(const BilinearAlgorithm& a) {
  std::ostringstream os;
  os << "bilinear <" << a.m << "," << a.n << "," << a.p << ";" << a.t() << ">";
  if (a.verified) os << " verified=" << a.verified->mode;
  return os.str();
}

std::string describe(const DecomposedAlgorithm& a) {
  std::ostringstream os;
  os << "decomposed n0=" << a.n0 << " s0=" << a.s0() << " t=" << a.t();
  if (a.verified) os << " verified=" << a.verified->mode;
  return os.str();
}

std::string describe(const LoadedAlgorithm& a) {
  return std::visit([](const auto& x) { return describe(x); }, a);
}

// ---------------------------------------------------------------------------
// dense matrix text format: "rows cols" header, then row-major entries.

Dense<Rational> read_matrix_rational(const std::string& path) {
  std::istringstream in(read_file(path));
  size_t r = 0, c = 0;
  if (!(in >> r >> c) || r == 0 || c == 0)
    fail(Errc::parse, path + ": matrix header must be two positive counts");
  Dense<Rational> A(r, c);
  std::string tok;
  for (size_t i = 0; i < r * c; ++i) {
    if (!(in >> tok)) fail(Errc::parse, path + ": matrix file ends early");
    A.a[i] = Rational::from_string(tok);
  }
  if (in >> tok) fail(Errc::parse, path + ": trailing data after matrix entries");
  return A;
}

Dense<double> read_matrix_double(const std::string& path) {
  std::istringstream in(read_file(path));
  size_t r = 0, c = 0;
  if (!(in >> r >> c) || r == 0 || c == 0)
    fail(Errc::parse, path + ": matrix header must be two positive counts");
  Dense<double> A(r, c);
  for (size_t i = 0; i < r * c; ++i)
    if (!(in >> A.a[i])) fail(Errc::parse, path + ": matrix file ends early");
  double extra;
  if (in >> extra) fail(Errc::parse, path + ": trailing data after matrix entries");
  return A;
}

template <class T, class Fmt>
std::string matrix_text(const Dense<T>& A, Fmt fmt) {
  std::ostringstream os;
  os << A.rows << " " << A.cols << "\n";
  for (size_t i = 0; i < A.rows; ++i) {
    for (size_t j = 0; j < A.cols; ++j) {
      if (j) os << " ";
      fmt(os, A.at(i, j));
    }
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// gen

struct GenOpts {
  std::string family;
  uint32_t n0 = 0;
  std::string from = "new25";
  std::string subst;
  std::string out;
  std::string report;
  std::string verify_mode = "none";
  bool expand_flag = false;
  int trials = 20;
  uint64_t prime = kDefaultPrime;
  uint64_t seed = 1;
  uint64_t budget = kDefaultExpandBudget;
};

VerifyReport run_verify_mode(const std::string& mode, const BilinearAlgorithm& alg,
                             const GenOpts& o) {
  if (mode == "exact") return verify_exact(alg, o.budget);
  if (mode == "brent") return verify_brent(alg, o.budget);
  if (mode == "random") return verify_random(alg, o.trials, o.prime, o.seed);
  return verify_multiply(alg, 3, 1, o.seed);
}

json report_of(const VerifyReport& r, double elapsed) {
  json j;
  j["mode"] = r.mode;
  j["ok"] = r.ok;
  if (!r.detail.empty()) j["detail"] = r.detail;
  if (r.prime) j["prime"] = r.prime;
  if (r.trials) j["trials"] = r.trials;
  if (r.mode == "random" || r.mode == "multiply") j["seed"] = r.seed;
  j["elapsed_seconds"] = elapsed;
  return j;
}

int finish_gen_bilinear(BilinearAlgorithm alg, const GenOpts& o, json extra = json::object()) {
  int rc = 0;
  if (o.verify_mode != "none") {
    auto t0 = std::chrono::steady_clock::now();
    VerifyReport r = run_verify_mode(o.verify_mode, alg, o);
    extra["verification"] = report_of(r, seconds_since(t0));
    info(o.out) << "verify " << r.mode << ": " << (r.ok ? "ok" : "FAILED " + r.detail);
    if (r.mode == "random") info(o.out) << " (prime=" << o.prime << " seed=" << o.seed << ")";
    info(o.out) << "\n";
    if (!r.ok) rc = kExitVerifyFailed;
    if (r.ok) stamp(alg, r);
  }
  emit_algorithm(o.out, to_json(alg));
  info(o.out) << "gen " << o.family << ": " << describe(alg)
              << (o.out.empty() ? "" : " -> " + o.out) << "\n";
  if (!o.report.empty()) {
    extra["algorithm"] = describe(alg);
    extra["t"] = alg.t();
    write_file(o.report, extra.dump(2) + "\n");
  }
  return rc;
}

int cmd_gen(const GenOpts& o) {
  if (o.family == "strassen") {
    require(o.n0 == 0 || o.n0 == 2, Errc::domain, "strassen has base dimension 2");
    return finish_gen_bilinear(strassen(), o);
  }
  require(o.n0 > 0, Errc::domain, "--n0 is required for this family");
  if (o.family == "pan") return finish_gen_bilinear(gen_pan(o.n0), o);
  if (o.family == "new25") return finish_gen_bilinear(gen_new25(o.n0), o);
  if (o.family == "decomposed") {
    DecomposedAlgorithm dec =
        o.from == "pan" ? gen_pan_decomposed(o.n0) : gen_new25_decomposed(o.n0);
    int rc = 0;
    json extra;
    if (o.verify_mode == "random") {
      auto t0 = std::chrono::steady_clock::now();
      VerifyReport r = verify_random(dec, o.trials, o.prime, o.seed);
      extra["verification"] = report_of(r, seconds_since(t0));
      info(o.out) << "verify random: " << (r.ok ? "ok" : "FAILED " + r.detail)
                  << " (prime=" << o.prime << " seed=" << o.seed << ")\n";
      if (r.ok)
        stamp(dec, r);
      else
        rc = kExitVerifyFailed;
    } else if (o.verify_mode != "none") {
      auto t0 = std::chrono::steady_clock::now();
      VerifyReport r = run_verify_mode(o.verify_mode, dec.expand(), o);
      extra["verification"] = report_of(r, seconds_since(t0));
      info(o.out) << "verify " << r.mode << ": " << (r.ok ? "ok" : "FAILED " + r.detail) << "\n";
      if (r.ok)
        stamp(dec, r);
      else
        rc = kExitVerifyFailed;
    }
    emit_algorithm(o.out, to_json(dec));
    info(o.out) << "gen decomposed(" << o.from << "): " << describe(dec)
                << (o.out.empty() ? "" : " -> " + o.out) << "\n";
    if (!o.report.empty()) write_file(o.report, extra.dump(2) + "\n");
    return rc;
  }

  // new25b: --n0 names the factor base m0; the composed base is m0^2.
  std::string subst = o.subst;
  if (subst.empty()) {
    const char* env = std::getenv("TAMM_S444_48");
    if (env && *env) subst = env;
  }
  Ta25bAlgorithm tb = [&] {
    if (subst.empty()) return gen_new25b(o.n0);
    LoadedAlgorithm rep = load_algorithm(subst);
    require(std::holds_alternative<BilinearAlgorithm>(rep), Errc::domain,
            "replacement file must hold a plain bilinear algorithm");
    return gen_new25b(o.n0, std::get<BilinearAlgorithm>(std::move(rep)));
  }();

  json rep;
  rep["family"] = "new25b";
  rep["m0"] = tb.m0;
  rep["n0"] = tb.n0();
  rep["factor_rank"] = tb.factor_rank();
  rep["h"] = tb.h();
  rep["blocks"] = tb.blocks();
  rep["replacement_rank"] = tb.replacement ? tb.replacement->t() : 49;
  rep["rank"] = tb.rank();
  rep["expanded"] = o.expand_flag;

  int rc = 0;
  if (o.expand_flag) {
    BilinearAlgorithm full = expand(tb);
    if (o.verify_mode != "none") {
      auto t0 = std::chrono::steady_clock::now();
      VerifyReport r = run_verify_mode(o.verify_mode, full, o);
      rep["verification"] = report_of(r, seconds_since(t0));
      info(o.out) << "verify " << r.mode << ": " << (r.ok ? "ok" : "FAILED " + r.detail) << "\n";
      if (r.ok)
        stamp(full, r);
      else
        rc = kExitVerifyFailed;
    }
    emit_algorithm(o.out, to_json(full));
  } else {
    if (o.verify_mode == "random") {
      auto t0 = std::chrono::steady_clock::now();
      VerifyReport r = verify_random(tb, o.trials, o.prime, o.seed);
      rep["verification"] = report_of(r, seconds_since(t0));
      info(o.out) << "verify random (streaming): " << (r.ok ? "ok" : "FAILED " + r.detail)
                  << " (prime=" << o.prime << " seed=" << o.seed << ")\n";
      if (!r.ok) rc = kExitVerifyFailed;
    } else if (o.verify_mode != "none") {
      fail(Errc::domain, "new25b supports --verify random without --expand");
    }
    emit_algorithm(o.out, to_json(tb.factor.dec));
  }
  info(o.out) << "gen new25b m0=" << tb.m0 << ": n0=" << tb.n0()
              << " factor_rank=" << tb.factor_rank() << " h=" << tb.h()
              << " blocks=" << tb.blocks()
              << " replacement=" << (tb.replacement ? std::to_string(tb.replacement->t()) : "none")
              << " rank=" << tb.rank() << (o.out.empty() ? "" : " -> " + o.out) << "\n";
  if (!o.report.empty()) write_file(o.report, rep.dump(2) + "\n");
  return rc;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
  std::string in;
  std::string mode;
  int trials = 20;
  uint64_t prime = kDefaultPrime;
  uint64_t seed = 1;
  uint64_t budget = kDefaultExpandBudget;
  int samples = 3;
  int levels = 1;
  std::string report;
  bool stamp_file = false;
};

int cmd_verify(const VerifyOpts& o) {
  LoadedAlgorithm alg = load_algorithm(o.in);
  auto t0 = std::chrono::steady_clock::now();
  VerifyReport r;
  if (o.mode == "random") {
    r = std::visit(
        [&](const auto& a) { return verify_random(a, o.trials, o.prime, o.seed); }, alg);
  } else {
    // Non-random modes run on the plain bilinear form.
    const BilinearAlgorithm* bp = std::get_if<BilinearAlgorithm>(&alg);
    BilinearAlgorithm expanded;
    if (!bp) {
      expanded = std::get<DecomposedAlgorithm>(alg).expand();
      bp = &expanded;
    }
    if (o.mode == "exact")
      r = verify_exact(*bp, o.budget);
    else if (o.mode == "brent")
      r = verify_brent(*bp, o.budget);
    else
      r = verify_multiply(*bp, o.samples, o.levels, o.seed);
  }
  double elapsed = seconds_since(t0);

  json j = report_of(r, elapsed);
  j["input"] = o.in;
  j["algorithm"] = describe(alg);
  if (o.mode == "exact" || o.mode == "brent") j["budget"] = o.budget;
  if (o.mode == "multiply") {
    j["samples"] = o.samples;
    j["levels"] = o.levels;
  }
  if (!o.report.empty()) write_file(o.report, j.dump(2) + "\n");

  std::cout << "verify " << r.mode << " " << o.in << ": " << (r.ok ? "ok" : "FAILED");
  if (!r.ok) std::cout << " (" << r.detail << ")";
  if (o.mode == "random")
    std::cout << " trials=" << o.trials << " prime=" << o.prime << " seed=" << o.seed;
  if (o.mode == "multiply") std::cout << " seed=" << o.seed;
  std::cout << " elapsed=" << std::fixed << std::setprecision(2) << elapsed << "s\n";

  if (!r.ok) return kExitVerifyFailed;
  if (o.stamp_file) {
    std::visit(
        [&](auto& a) {
          stamp(a, r);
          save_algorithm(o.in, a);
        },
        alg);
    std::cout << "stamped " << o.in << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

const std::vector<uint32_t> kCountRows = {28, 30, 32, 34, 36, 38, 40, 42, 44, 46, 48, 50, 60};
const std::vector<uint32_t> kCoefRows = {20, 30, 40, 42, 44, 46, 48, 50, 60};

std::string fmt6(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << round_half_even(x, 6);
  return os.str();
}

std::string fmt3(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << round_half_even(x, 3);
  return os.str();
}

json analyze_counts(std::ostream& os) {
  json rows = json::array();
  os << "multiplication counts and exponents\n";
  os << std::setw(5) << "n0" << std::setw(12) << "t(new25)" << std::setw(14) << "omega(new25)"
     << std::setw(12) << "t(pan)" << std::setw(14) << "omega(pan)" << "\n";
  for (uint32_t n0 : kCountRows) {
    uint64_t tn = t_new(n0), tp = t_pan(n0);
    double on = exponent(n0, tn), op = exponent(n0, tp);
    os << std::setw(5) << n0 << std::setw(12) << tn << std::setw(14) << fmt6(on) << std::setw(12)
       << tp << std::setw(14) << fmt6(op) << "\n";
    rows.push_back({{"n0", n0},
                    {"t_new25", tn},
                    {"omega_new25", round_half_even(on, 6)},
                    {"t_pan", tp},
                    {"omega_pan", round_half_even(op, 6)}});
  }
  return rows;
}

json analyze_squared(std::ostream& os) {
  json rows = json::array();
  os << "\nsquared family (base m0^2)\n";
  os << std::setw(5) << "m0" << std::setw(7) << "n0" << std::setw(14) << "rank(new25b)"
     << std::setw(16) << "omega(new25b)" << std::setw(14) << "rank(pan^2)" << std::setw(14)
     << "omega(pan^2)" << "\n";
  for (uint32_t m0 : kCountRows) {
    uint64_t rb = new25b_rank(m0);
    uint64_t tp = t_pan(m0);
    uint64_t rp = tp * tp;
    uint64_t n0 = (uint64_t)m0 * m0;
    double ob = exponent(n0, rb), op2 = exponent(n0, rp);
    os << std::setw(5) << m0 << std::setw(7) << n0 << std::setw(14) << rb << std::setw(16)
       << fmt6(ob) << std::setw(14) << rp << std::setw(14) << fmt6(op2) << "\n";
    rows.push_back({{"m0", m0},
                    {"n0", n0},
                    {"rank_new25b", rb},
                    {"omega_new25b", round_half_even(ob, 6)},
                    {"rank_pan_squared", rp},
                    {"omega_pan_squared", round_half_even(op2, 6)}});
  }
  return rows;
}

json analyze_coefficients(std::ostream& os, const std::vector<uint32_t>& selected) {
  json rows = json::array();
  os << "\ndecomposed costs (new25)\n";
  os << std::setw(5) << "n0" << std::setw(9) << "t0" << std::setw(7) << "s0" << std::setw(10)
     << "nnz(U)" << std::setw(8) << "nns(U)" << std::setw(10) << "nnz(V)" << std::setw(8)
     << "nns(V)" << std::setw(10) << "nnz(W)" << std::setw(8) << "nns(W)" << std::setw(9) << "q(U)"
     << std::setw(9) << "q(V)" << std::setw(9) << "q(W)" << std::setw(10) << "c(orig)"
     << std::setw(9) << "c(red)" << "\n";
  for (uint32_t n0 : selected) {
    DecomposedAlgorithm dec = gen_new25_decomposed(n0);
    AlgorithmStats st = stats(dec);
    double cr = leading_coefficient(dec).to_double();
    double co = leading_coefficient(dec.expand()).to_double();
    os << std::setw(5) << n0 << std::setw(9) << dec.t() << std::setw(7) << dec.s0()
       << std::setw(10) << st.u.nnz << std::setw(8) << st.u.nns << std::setw(10) << st.v.nnz
       << std::setw(8) << st.v.nns << std::setw(10) << st.w.nnz << std::setw(8) << st.w.nns
       << std::setw(9) << st.q_u() << std::setw(9) << st.q_v() << std::setw(9) << st.q_w()
       << std::setw(10) << fmt3(co) << std::setw(9) << fmt3(cr) << "\n";
    rows.push_back({{"n0", n0},
                    {"t0", dec.t()},
                    {"s0", dec.s0()},
                    {"nnz_u", st.u.nnz},
                    {"nns_u", st.u.nns},
                    {"nnz_v", st.v.nnz},
                    {"nns_v", st.v.nns},
                    {"nnz_w", st.w.nnz},
                    {"nns_w", st.w.nns},
                    {"q_u", st.q_u()},
                    {"q_v", st.q_v()},
                    {"q_w", st.q_w()},
                    {"c_original", round_half_even(co, 3)},
                    {"c_reduced", round_half_even(cr, 3)}});
  }
  return rows;
}

struct AnalyzeOpts {
  std::string in;
  std::string table = "all";
  std::vector<uint32_t> rows;
  std::string json_out;
};

json analyze_file(std::ostream& os, const std::string& path) {
  LoadedAlgorithm alg = load_algorithm(path);
  json j;
  j["input"] = path;
  j["algorithm"] = describe(alg);
  os << path << ": " << describe(alg) << "\n";
  std::visit(
      [&](const auto& a) {
        AlgorithmStats st = stats(a);
        auto line = [&](const char* name, const MatrixStats& m) {
          os << "  " << name << ": " << m.rows << "x" << m.cols << " nnz=" << m.nnz
             << " nns=" << m.nns << "\n";
          j[name] = {{"rows", m.rows}, {"cols", m.cols}, {"nnz", m.nnz}, {"nns", m.nns}};
        };
        line("U", st.u);
        line("V", st.v);
        line("W", st.w);
        if (st.phi) line("phi", *st.phi);
        os << "  q: U=" << st.q_u() << " V=" << st.q_v() << " W=" << st.q_w()
           << " total=" << st.q() << "\n";
        j["q"] = {{"u", st.q_u()}, {"v", st.q_v()}, {"w", st.q_w()}, {"total", st.q()}};
      },
      alg);
  uint64_t base = 0, t = 0;
  if (const auto* b = std::get_if<BilinearAlgorithm>(&alg)) {
    if (b->m == b->n && b->n == b->p) base = b->m;
    t = b->t();
  } else {
    base = std::get<DecomposedAlgorithm>(alg).n0;
    t = std::get<DecomposedAlgorithm>(alg).t();
  }
  if (base >= 2) {
    double om = exponent(base, t);
    os << "  omega0 = " << fmt6(om) << "\n";
    j["omega0"] = round_half_even(om, 6);
  }
  try {
    double c = std::visit([](const auto& a) { return leading_coefficient(a).to_double(); }, alg);
    os << "  leading coefficient = " << fmt3(c) << "\n";
    j["leading_coefficient"] = round_half_even(c, 3);
  } catch (const Error&) {
  }
  return j;
}

int cmd_analyze(const AnalyzeOpts& o) {
  std::ostringstream os;
  json j;
  if (!o.in.empty()) {
    j = analyze_file(os, o.in);
  } else {
    if (o.table == "counts" || o.table == "all") j["counts"] = analyze_counts(os);
    if (o.table == "squared" || o.table == "all") j["squared"] = analyze_squared(os);
    if (o.table == "coefficients" || o.table == "all")
      j["coefficients"] = analyze_coefficients(os, o.rows.empty() ? kCoefRows : o.rows);
  }
  std::cout << os.str();
  if (!o.json_out.empty()) write_file(o.json_out, j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// transforms

int cmd_compose(const std::string& a_path, const std::string& b_path, const std::string& out) {
  LoadedAlgorithm a = load_algorithm(a_path);
  LoadedAlgorithm b = load_algorithm(b_path);
  require(std::holds_alternative<BilinearAlgorithm>(a), Errc::domain,
          "compose expects a plain bilinear left operand");
  const auto& ab = std::get<BilinearAlgorithm>(a);
  if (const auto* bd = std::get_if<DecomposedAlgorithm>(&b)) {
    DecomposedAlgorithm c = compose(ab, *bd);
    emit_algorithm(out, to_json(c));
    info(out) << "compose: " << describe(c) << (out.empty() ? "" : " -> " + out) << "\n";
  } else {
    BilinearAlgorithm c = compose(ab, std::get<BilinearAlgorithm>(b));
    emit_algorithm(out, to_json(c));
    info(out) << "compose: " << describe(c) << (out.empty() ? "" : " -> " + out) << "\n";
  }
  return 0;
}

BilinearAlgorithm load_bilinear(const std::string& path, const char* what) {
  LoadedAlgorithm a = load_algorithm(path);
  require(std::holds_alternative<BilinearAlgorithm>(a), Errc::domain,
          std::string(what) + " expects a plain bilinear algorithm");
  return std::get<BilinearAlgorithm>(std::move(a));
}

int cmd_rotate(const std::string& in, const std::string& out) {
  BilinearAlgorithm c = rotate(load_bilinear(in, "rotate"));
  emit_algorithm(out, to_json(c));
  info(out) << "rotate: " << describe(c) << (out.empty() ? "" : " -> " + out) << "\n";
  return 0;
}

int cmd_symmetrize(const std::string& in, const std::string& out) {
  BilinearAlgorithm c = symmetrize(load_bilinear(in, "symmetrize"));
  emit_algorithm(out, to_json(c));
  info(out) << "symmetrize: " << describe(c) << (out.empty() ? "" : " -> " + out) << "\n";
  return 0;
}

int cmd_merge_kin(const std::string& in, const std::string& out) {
  BilinearAlgorithm a = load_bilinear(in, "merge-kin");
  auto pairs = find_kin_pairs(a);
  BilinearAlgorithm c = merge_kin(a, pairs);
  emit_algorithm(out, to_json(c));
  info(out) << "merge-kin: " << pairs.size() << " pairs, t " << a.t() << " -> " << c.t()
            << (out.empty() ? "" : " -> " + out) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// multiply

struct MultiplyOpts {
  std::string algorithm;
  std::string a_path, b_path;
  int levels = 1;
  std::string domain = "rational";
  uint64_t prime = kDefaultPrime;
  int base_threshold = 0;
  std::string out;
  std::string count_report;
};

void check_multiply_dims(uint64_t m0, uint64_t n0, uint64_t p0, int levels, size_t ar, size_t ac,
                         size_t br, size_t bc) {
  uint64_t em = 1, en = 1, ep = 1;
  for (int l = 0; l < levels; ++l) {
    em *= m0;
    en *= n0;
    ep *= p0;
    require(em <= (1u << 20) && en <= (1u << 20) && ep <= (1u << 20), Errc::dimension_mismatch,
            "operand dimensions overflow at the requested level count");
  }
  require(ar == em && ac == en && br == en && bc == ep, Errc::dimension_mismatch,
          "operands must be m0^levels x n0^levels and n0^levels x p0^levels");
}

template <class Alg>
int multiply_with(const Alg& alg, uint64_t m0, uint64_t n0, uint64_t p0, const MultiplyOpts& o) {
  int threads = threads_from_env();
  json rep;
  rep["levels"] = o.levels;
  rep["domain"] = o.domain;
  rep["threads"] = threads;

  auto t0 = std::chrono::steady_clock::now();
  if (o.domain == "float") {
    Dense<double> A = read_matrix_double(o.a_path);
    Dense<double> B = read_matrix_double(o.b_path);
    check_multiply_dims(m0, n0, p0, o.levels, A.rows, A.cols, B.rows, B.cols);
    Dense<double> C =
        recursive_multiply(DoubleDomain{}, alg, A, B, o.levels, o.base_threshold, threads);
    emit_text(o.out, matrix_text(C, [](std::ostream& os, double x) {
      os << std::setprecision(17) << x;
    }));
  } else if (o.domain == "prime") {
    PrimeDomain dom{PrimeField(o.prime)};
    Dense<Rational> Aq = read_matrix_rational(o.a_path);
    Dense<Rational> Bq = read_matrix_rational(o.b_path);
    check_multiply_dims(m0, n0, p0, o.levels, Aq.rows, Aq.cols, Bq.rows, Bq.cols);
    Dense<uint64_t> A(Aq.rows, Aq.cols), B(Bq.rows, Bq.cols);
    for (size_t i = 0; i < Aq.a.size(); ++i) A.a[i] = dom.from_rational(Aq.a[i]);
    for (size_t i = 0; i < Bq.a.size(); ++i) B.a[i] = dom.from_rational(Bq.a[i]);
    Dense<uint64_t> C = recursive_multiply(dom, alg, A, B, o.levels, o.base_threshold, threads);
    emit_text(o.out, matrix_text(C, [](std::ostream& os, uint64_t x) { os << x; }));
    rep["prime"] = o.prime;
  } else {
    Dense<Rational> A = read_matrix_rational(o.a_path);
    Dense<Rational> B = read_matrix_rational(o.b_path);
    check_multiply_dims(m0, n0, p0, o.levels, A.rows, A.cols, B.rows, B.cols);
    Dense<Rational> C =
        recursive_multiply(RationalDomain{}, alg, A, B, o.levels, o.base_threshold, threads);
    emit_text(o.out, matrix_text(C, [](std::ostream& os, const Rational& x) {
      os << x.to_string();
    }));
  }
  double elapsed = seconds_since(t0);

  OpCount ops = count_operations(alg, o.levels);
  rep["multiplications"] = ops.multiplications;
  rep["linear_operations"] = ops.linear;
  rep["elapsed_seconds"] = elapsed;
  info(o.out) << "multiply: levels=" << o.levels << " domain=" << o.domain
              << " multiplications=" << ops.multiplications << " linear=" << ops.linear
              << " elapsed=" << std::fixed << std::setprecision(2) << elapsed << "s\n";
  if (!o.count_report.empty()) write_file(o.count_report, rep.dump(2) + "\n");
  return 0;
}

int cmd_multiply(const MultiplyOpts& o) {
  LoadedAlgorithm alg = load_algorithm(o.algorithm);
  if (const auto* b = std::get_if<BilinearAlgorithm>(&alg))
    return multiply_with(*b, b->m, b->n, b->p, o);
  const auto& d = std::get<DecomposedAlgorithm>(alg);
  return multiply_with(d, d.n0, d.n0, d.n0, o);
}

// ---------------------------------------------------------------------------
// export / import

int cmd_export(const std::string& in, const std::string& out) {
  LoadedAlgorithm alg = load_algorithm(in);
  std::visit([&](const auto& a) { emit_algorithm(out, to_json(a)); }, alg);
  info(out) << "export: " << describe(alg) << (out.empty() ? "" : " -> " + out) << "\n";
  return 0;
}

int cmd_import(const std::string& in, const std::string& out) {
  LoadedAlgorithm alg = load_algorithm(in);
  std::cout << in << ": " << describe(alg) << "\n";
  if (!out.empty()) {
    std::visit([&](const auto& a) { save_algorithm(out, a); }, alg);
    std::cout << "written to " << out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trilinear aggregation matrix multiplication toolkit"};
  app.require_subcommand(1);
  app.footer(
      "exit codes: 0 success, 3 error (category printed to stderr), 4 verification failure.\n"
      "TAMM_THREADS sets the multiply thread count; TAMM_S444_48 names a default\n"
      "<4,4,4;48> replacement file for gen --family new25b.");

  GenOpts g;
  auto* gen = app.add_subcommand("gen", "generate an algorithm family member");
  gen->add_option("--family", g.family, "family to generate")
      ->required()
      ->check(CLI::IsMember({"pan", "new25", "new25b", "decomposed", "strassen"}));
  gen->add_option("--n0", g.n0, "base dimension (factor base m0 for new25b)");
  gen->add_option("--from", g.from, "decomposed flavor")
      ->check(CLI::IsMember({"pan", "new25"}));
  gen->add_option("--subst", g.subst, "<4,4,4> replacement file for new25b")
      ->check(CLI::ExistingFile);
  gen->add_option("-o,--out", g.out, "algorithm file (stdout when omitted)");
  gen->add_option("--report", g.report, "write a JSON generation report");
  gen->add_option("--verify", g.verify_mode, "verify before writing")
      ->check(CLI::IsMember({"none", "exact", "brent", "random", "multiply"}));
  gen->add_flag("--expand", g.expand_flag, "materialize the new25b composition");
  gen->add_option("--trials", g.trials, "random verification trials");
  gen->add_option("--prime", g.prime, "verification prime");
  gen->add_option("--seed", g.seed, "verification seed");
  gen->add_option("--budget", g.budget, "exact expansion term budget");

  VerifyOpts v;
  auto* ver = app.add_subcommand("verify", "verify an algorithm file");
  ver->add_option("--in", v.in, "algorithm file")->required()->check(CLI::ExistingFile);
  ver->add_option("--mode", v.mode, "verification mode")
      ->required()
      ->check(CLI::IsMember({"exact", "brent", "random", "multiply"}));
  ver->add_option("--trials", v.trials, "random trials");
  ver->add_option("--prime", v.prime, "field prime");
  ver->add_option("--seed", v.seed, "rng seed");
  ver->add_option("--budget", v.budget, "exact expansion term budget");
  ver->add_option("--samples", v.samples, "multiply-mode sample count");
  ver->add_option("--levels", v.levels, "multiply-mode recursion levels");
  ver->add_option("--report", v.report, "write a JSON verification report");
  ver->add_flag("--stamp", v.stamp_file, "record passing verification in the file");

  AnalyzeOpts an;
  auto* ana = app.add_subcommand("analyze", "cost tables or per-file analysis");
  ana->add_option("--in", an.in, "analyze one algorithm file")->check(CLI::ExistingFile);
  ana->add_option("--table", an.table, "which table to print")
      ->check(CLI::IsMember({"counts", "squared", "coefficients", "all"}));
  ana->add_option("--rows", an.rows, "base dimensions for the coefficient table");
  ana->add_option("--json", an.json_out, "write the same tables as JSON");

  std::string ca, cb, cout_path;
  auto* comp = app.add_subcommand("compose", "tensor product of two algorithms");
  comp->add_option("a", ca, "left algorithm file")->required()->check(CLI::ExistingFile);
  comp->add_option("b", cb, "right algorithm file")->required()->check(CLI::ExistingFile);
  comp->add_option("-o,--out", cout_path, "output file (stdout when omitted)");

  std::string rin, rout;
  auto* rot = app.add_subcommand("rotate", "cycle the trilinear roles (U,V,W)");
  rot->add_option("--in", rin, "algorithm file")->required()->check(CLI::ExistingFile);
  rot->add_option("-o,--out", rout, "output file (stdout when omitted)");

  std::string sin, sout;
  auto* sym = app.add_subcommand("symmetrize", "product of the three rotations");
  sym->add_option("--in", sin, "algorithm file")->required()->check(CLI::ExistingFile);
  sym->add_option("-o,--out", sout, "output file (stdout when omitted)");

  std::string kin, kout;
  auto* mk = app.add_subcommand("merge-kin", "merge kin row pairs");
  mk->add_option("--in", kin, "algorithm file")->required()->check(CLI::ExistingFile);
  mk->add_option("-o,--out", kout, "output file (stdout when omitted)");

  MultiplyOpts m;
  auto* mul = app.add_subcommand("multiply", "recursive matrix multiplication");
  mul->add_option("--algorithm", m.algorithm, "algorithm file")
      ->required()
      ->check(CLI::ExistingFile);
  mul->add_option("a", m.a_path, "left operand (text matrix)")
      ->required()
      ->check(CLI::ExistingFile);
  mul->add_option("b", m.b_path, "right operand (text matrix)")
      ->required()
      ->check(CLI::ExistingFile);
  mul->add_option("--levels", m.levels, "recursion levels")->required();
  mul->add_option("--domain", m.domain, "scalar domain")
      ->check(CLI::IsMember({"rational", "prime", "float"}));
  mul->add_option("--prime", m.prime, "field prime for --domain prime");
  mul->add_option("--base-threshold", m.base_threshold, "naive below this many levels");
  mul->add_option("-o,--out", m.out, "product file (stdout when omitted)");
  mul->add_option("--count-report", m.count_report, "write a JSON operation-count report");

  std::string ein, eout;
  auto* exp = app.add_subcommand("export", "canonical re-serialization");
  exp->add_option("--in", ein, "algorithm file")->required()->check(CLI::ExistingFile);
  exp->add_option("-o,--out", eout, "output file (stdout when omitted)");

  std::string iin, iout;
  auto* imp = app.add_subcommand("import", "parse, validate, and summarize");
  imp->add_option("--in", iin, "algorithm file")->required()->check(CLI::ExistingFile);
  imp->add_option("-o,--out", iout, "optionally rewrite canonically");

  int rc = 0;
  gen->callback([&] { rc = cmd_gen(g); });
  ver->callback([&] { rc = cmd_verify(v); });
  ana->callback([&] { rc = cmd_analyze(an); });
  comp->callback([&] { rc = cmd_compose(ca, cb, cout_path); });
  rot->callback([&] { rc = cmd_rotate(rin, rout); });
  sym->callback([&] { rc = cmd_symmetrize(sin, sout); });
  mk->callback([&] { rc = cmd_merge_kin(kin, kout); });
  mul->callback([&] { rc = cmd_multiply(m); });
  exp->callback([&] { rc = cmd_export(ein, eout); });
  imp->callback([&] { rc = cmd_import(iin, iout); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const tamm::Error& e) {
    std::cerr << "tamm: error: " << errc_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "tamm: error: internal: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
