#include "tamm/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "tamm/error.hpp"

namespace tamm {
namespace {

using json = nlohmann::json;

std::string quote(const std::string& s) { return json(s).dump(); }

void append_triples(std::string& out, const char* key, const SparseMatrix& m) {
  out += "  \"";
  out += key;
  out += "\": [";
  bool first = true;
  for (uint32_t r = 0; r < m.nrows(); ++r) {
    const auto rv = m.row(r);
    for (size_t k = 0; k < rv.size(); ++k) {
      out += first ? "\n" : ",\n";
      first = false;
      out += "    [";
      out += std::to_string(r);
      out += ", ";
      out += std::to_string(rv.cols[k]);
      out += ", \"";
      out += rv.vals[k].to_string();
      out += "\"]";
    }
  }
  out += first ? "]" : "\n  ]";
}

std::string tag_text(const RowTag& tag) {
  struct Printer {
    std::string operator()(const UntaggedTag&) const { return "{\"kind\": \"untagged\"}"; }
    std::string operator()(const AggTag& t) const {
      std::string s = "{\"kind\": \"agg\", \"table\": " + std::to_string(t.table) +
                      ", \"triple\": [" + std::to_string(t.triple[0]) + ", " +
                      std::to_string(t.triple[1]) + ", " + std::to_string(t.triple[2]) +
                      "], \"barred\": ";
      s += t.barred ? "true}" : "false}";
      return s;
    }
    std::string operator()(const CorrectionTag& t) const {
      return "{\"kind\": \"corr\", \"i\": " + std::to_string(t.i) +
             ", \"slot\": " + std::to_string(t.slot) + "}";
    }
    std::string operator()(const CancelTag& t) const {
      return "{\"kind\": \"cancel\", \"cell\": [" + std::to_string(t.cell[0]) + ", " +
             std::to_string(t.cell[1]) + "], \"slot\": " + std::to_string(t.slot) + "}";
    }
    std::string operator()(const ComposedTag& t) const {
      return "{\"kind\": \"composed\", \"left\": " + std::to_string(t.left) +
             ", \"right\": " + std::to_string(t.right) + "}";
    }
  };
  return std::visit(Printer{}, tag);
}

void append_tags(std::string& out, const std::vector<RowTag>& tags) {
  if (tags.empty()) return;
  out += ",\n  \"tags\": [";
  for (size_t i = 0; i < tags.size(); ++i) {
    out += i == 0 ? "\n    " : ",\n    ";
    out += tag_text(tags[i]);
  }
  out += "\n  ]";
}

void append_verified(std::string& out, const std::optional<Verification>& v) {
  if (!v) return;
  out += ",\n  \"verified\": {\"mode\": " + quote(v->mode) + ", \"prime\": \"" +
         std::to_string(v->prime) + "\", \"trials\": " + std::to_string(v->trials) +
         ", \"seed\": " + std::to_string(v->seed) +
         ", \"provenance\": " + quote(v->provenance) + "}";
}

const json& member(const json& j, const char* key) {
  const auto it = j.find(key);
  require(it != j.end(), Errc::parse, std::string("missing field '") + key + "'");
  return *it;
}

uint64_t get_uint(const json& j, const char* key, uint64_t max) {
  const json& v = member(j, key);
  require(v.is_number_unsigned(), Errc::parse,
          std::string("field '") + key + "' must be a nonnegative integer");
  const uint64_t n = v.get<uint64_t>();
  require(n <= max, Errc::parse, std::string("field '") + key + "' out of range");
  return n;
}

int get_int(const json& v, const char* what) {
  require(v.is_number_integer(), Errc::parse, std::string(what) + " must be an integer");
  const int64_t n = v.get<int64_t>();
  require(n >= INT32_MIN && n <= INT32_MAX, Errc::parse, std::string(what) + " out of range");
  return static_cast<int>(n);
}

SparseMatrix read_matrix(const json& j, const char* key, uint32_t nrows, uint32_t ncols) {
  const json& arr = member(j, key);
  require(arr.is_array(), Errc::parse, std::string("field '") + key + "' must be an array");
  std::vector<Triple> ts;
  ts.reserve(arr.size());
  for (const json& e : arr) {
    require(e.is_array() && e.size() == 3 && e[0].is_number_unsigned() &&
                e[1].is_number_unsigned() && e[2].is_string(),
            Errc::parse, "matrix entry must be [row, col, \"coefficient\"]");
    const uint64_t r = e[0].get<uint64_t>();
    const uint64_t c = e[1].get<uint64_t>();
    require(r < nrows && c < ncols, Errc::parse, "matrix entry out of range");
    Rational v = Rational::from_string(e[2].get<std::string>());
    require(!v.is_zero(), Errc::parse, "explicit zero coefficient");
    ts.push_back({static_cast<uint32_t>(r), static_cast<uint32_t>(c), std::move(v)});
  }
  return SparseMatrix::from_triples(nrows, ncols, std::move(ts), /*reject_duplicates=*/true);
}

std::array<int, 3> get_int3(const json& v, const char* what) {
  require(v.is_array() && v.size() == 3, Errc::parse,
          std::string(what) + " must be an array of 3 integers");
  return {get_int(v[0], what), get_int(v[1], what), get_int(v[2], what)};
}

RowTag read_tag(const json& j) {
  require(j.is_object(), Errc::parse, "tag must be an object");
  const json& kind = member(j, "kind");
  require(kind.is_string(), Errc::parse, "tag kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "untagged") return UntaggedTag{};
  if (k == "agg") {
    AggTag t;
    t.table = get_int(member(j, "table"), "tag table");
    require(t.table == 1 || t.table == 2, Errc::parse, "tag table must be 1 or 2");
    t.triple = get_int3(member(j, "triple"), "tag triple");
    const json& b = member(j, "barred");
    require(b.is_boolean(), Errc::parse, "tag barred must be a boolean");
    t.barred = b.get<bool>();
    return t;
  }
  if (k == "corr") {
    return CorrectionTag{get_int(member(j, "i"), "tag i"), get_int(member(j, "slot"), "tag slot")};
  }
  if (k == "cancel") {
    const json& cell = member(j, "cell");
    require(cell.is_array() && cell.size() == 2, Errc::parse,
            "tag cell must be an array of 2 integers");
    return CancelTag{{get_int(cell[0], "tag cell"), get_int(cell[1], "tag cell")},
                     get_int(member(j, "slot"), "tag slot")};
  }
  if (k == "composed") {
    return ComposedTag{static_cast<uint32_t>(get_uint(j, "left", UINT32_MAX)),
                       static_cast<uint32_t>(get_uint(j, "right", UINT32_MAX))};
  }
  fail(Errc::parse, "unknown tag kind '" + k + "'");
}

std::vector<RowTag> read_tags(const json& j, uint32_t t) {
  std::vector<RowTag> tags;
  const auto it = j.find("tags");
  if (it == j.end()) return tags;
  require(it->is_array() && it->size() == t, Errc::parse,
          "tags must be an array with one entry per row");
  tags.reserve(t);
  for (const json& e : *it) tags.push_back(read_tag(e));
  return tags;
}

std::optional<Verification> read_verified(const json& j) {
  const auto it = j.find("verified");
  if (it == j.end()) return std::nullopt;
  const json& v = *it;
  require(v.is_object(), Errc::parse, "verified must be an object");
  Verification out;
  const json& mode = member(v, "mode");
  require(mode.is_string(), Errc::parse, "verified mode must be a string");
  out.mode = mode.get<std::string>();
  const json& prime = member(v, "prime");
  require(prime.is_string(), Errc::parse, "verified prime must be a decimal string");
  const std::string ps = prime.get<std::string>();
  const auto [end, ec] = std::from_chars(ps.data(), ps.data() + ps.size(), out.prime);
  require(ec == std::errc() && end == ps.data() + ps.size(), Errc::parse,
          "verified prime must be a decimal string");
  out.trials = get_int(member(v, "trials"), "verified trials");
  out.seed = get_uint(v, "seed", UINT64_MAX);
  const json& prov = member(v, "provenance");
  require(prov.is_string(), Errc::parse, "verified provenance must be a string");
  out.provenance = prov.get<std::string>();
  return out;
}

void check_field(const json& j) {
  const json& f = member(j, "field");
  require(f.is_string() && f.get<std::string>() == "rational", Errc::parse,
          "field must be \"rational\"");
}

json parse_document(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  require(!j.is_discarded(), Errc::parse, "malformed JSON");
  require(j.is_object(), Errc::parse, "algorithm file must be a JSON object");
  return j;
}

}  // namespace

std::string to_json(const BilinearAlgorithm& alg) {
  std::string out;
  out.reserve(64 * (alg.U.nnz() + alg.V.nnz() + alg.W.nnz()) + 1024);
  out += "{\n";
  out += "  \"m\": " + std::to_string(alg.m) + ",\n";
  out += "  \"n\": " + std::to_string(alg.n) + ",\n";
  out += "  \"p\": " + std::to_string(alg.p) + ",\n";
  out += "  \"t\": " + std::to_string(alg.t()) + ",\n";
  out += "  \"field\": \"rational\",\n";
  append_triples(out, "U", alg.U);
  out += ",\n";
  append_triples(out, "V", alg.V);
  out += ",\n";
  append_triples(out, "W", alg.W);
  append_tags(out, alg.tags);
  append_verified(out, alg.verified);
  out += "\n}\n";
  return out;
}

std::string to_json(const DecomposedAlgorithm& alg) {
  std::string out;
  out.reserve(64 * (alg.phi.nnz() + alg.U_phi.nnz() + alg.V_phi.nnz() + alg.W_phi.nnz()) + 1024);
  out += "{\n";
  out += "  \"n0\": " + std::to_string(alg.n0) + ",\n";
  out += "  \"s0\": " + std::to_string(alg.s0()) + ",\n";
  out += "  \"t\": " + std::to_string(alg.t()) + ",\n";
  out += "  \"field\": \"rational\",\n";
  append_triples(out, "phi", alg.phi);
  out += ",\n";
  append_triples(out, "U_phi", alg.U_phi);
  out += ",\n";
  append_triples(out, "V_phi", alg.V_phi);
  out += ",\n";
  append_triples(out, "W_phi", alg.W_phi);
  append_tags(out, alg.tags);
  append_verified(out, alg.verified);
  out += "\n}\n";
  return out;
}

BilinearAlgorithm bilinear_from_json(const std::string& text) {
  const json j = parse_document(text);
  check_field(j);
  BilinearAlgorithm alg;
  alg.m = static_cast<uint32_t>(get_uint(j, "m", 1u << 20));
  alg.n = static_cast<uint32_t>(get_uint(j, "n", 1u << 20));
  alg.p = static_cast<uint32_t>(get_uint(j, "p", 1u << 20));
  require(alg.m >= 1 && alg.n >= 1 && alg.p >= 1, Errc::parse, "dimensions must be positive");
  const uint32_t t = static_cast<uint32_t>(get_uint(j, "t", UINT32_MAX));
  alg.U = read_matrix(j, "U", t, alg.m * alg.n);
  alg.V = read_matrix(j, "V", t, alg.n * alg.p);
  alg.W = read_matrix(j, "W", t, alg.p * alg.m);
  alg.tags = read_tags(j, t);
  alg.verified = read_verified(j);
  alg.validate();
  return alg;
}

DecomposedAlgorithm decomposed_from_json(const std::string& text) {
  const json j = parse_document(text);
  check_field(j);
  DecomposedAlgorithm alg;
  alg.n0 = static_cast<uint32_t>(get_uint(j, "n0", 1u << 16));
  require(alg.n0 >= 1, Errc::parse, "dimensions must be positive");
  const uint32_t s0 = static_cast<uint32_t>(get_uint(j, "s0", UINT32_MAX));
  const uint32_t t = static_cast<uint32_t>(get_uint(j, "t", UINT32_MAX));
  alg.phi = read_matrix(j, "phi", s0, alg.n0 * alg.n0);
  alg.U_phi = read_matrix(j, "U_phi", t, s0);
  alg.V_phi = read_matrix(j, "V_phi", t, s0);
  alg.W_phi = read_matrix(j, "W_phi", t, s0);
  alg.tags = read_tags(j, t);
  alg.verified = read_verified(j);
  alg.validate();
  return alg;
}

LoadedAlgorithm algorithm_from_json(const std::string& text) {
  const json j = parse_document(text);
  if (j.contains("phi")) return decomposed_from_json(text);
  return bilinear_from_json(text);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  require(in.good() || in.eof(), Errc::io, "read failed for " + path.string());
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), Errc::io, "cannot open " + path.string());
  out << text;
  out.flush();
  require(out.good(), Errc::io, "write failed for " + path.string());
}

void save_algorithm(const std::filesystem::path& path, const BilinearAlgorithm& alg) {
  write_file(path, to_json(alg));
}

void save_algorithm(const std::filesystem::path& path, const DecomposedAlgorithm& alg) {
  write_file(path, to_json(alg));
}

LoadedAlgorithm load_algorithm(const std::filesystem::path& path) {
  return algorithm_from_json(read_file(path));
}

}  // namespace tamm
