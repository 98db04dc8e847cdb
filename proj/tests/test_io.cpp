#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <string>
#include <variant>

#include "helpers.hpp"
#include "tamm/generate.hpp"
#include "tamm/io.hpp"
#include "tamm/ops.hpp"
#include "tamm/strassen.hpp"
#include "tamm/verify.hpp"

using namespace tamm;
namespace fs = std::filesystem;

namespace {

std::string replaced(std::string s, const std::string& from, const std::string& to) {
  const size_t pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  s.replace(pos, from.size(), to);
  return s;
}

const std::string kTiny = R"({
  "m": 1,
  "n": 1,
  "p": 1,
  "t": 1,
  "field": "rational",
  "U": [[0, 0, "1"]],
  "V": [[0, 0, "1"]],
  "W": [[0, 0, "1"]]
})";

}  // namespace

TEST_CASE("bilinear serialization round trips byte for byte") {
  BilinearAlgorithm s = strassen();
  const std::string text = to_json(s);
  BilinearAlgorithm back = bilinear_from_json(text);
  CHECK(back.m == 2);
  CHECK(back.n == 2);
  CHECK(back.p == 2);
  CHECK(back.t() == 7);
  CHECK(back.U.to_dense() == s.U.to_dense());
  CHECK(back.V.to_dense() == s.V.to_dense());
  CHECK(back.W.to_dense() == s.W.to_dense());
  CHECK(to_json(back) == text);
}

TEST_CASE("factored serialization round trips byte for byte") {
  DecomposedAlgorithm dec = gen_new25_decomposed(6);
  const std::string text = to_json(dec);
  DecomposedAlgorithm back = decomposed_from_json(text);
  CHECK(back.n0 == 6);
  CHECK(back.s0() == dec.s0());
  CHECK(back.t() == dec.t());
  CHECK(back.phi.to_dense() == dec.phi.to_dense());
  CHECK(to_json(back) == text);
}

TEST_CASE("serialization is deterministic across generator calls") {
  CHECK(to_json(gen_new25(6)) == to_json(gen_new25(6)));
  CHECK(to_json(gen_new25_decomposed(4)) == to_json(gen_new25_decomposed(4)));
}

TEST_CASE("document dispatch keys on the shared-transform field") {
  LoadedAlgorithm flat = algorithm_from_json(to_json(strassen()));
  CHECK(std::holds_alternative<BilinearAlgorithm>(flat));
  LoadedAlgorithm factored = algorithm_from_json(to_json(gen_new25_decomposed(4)));
  CHECK(std::holds_alternative<DecomposedAlgorithm>(factored));
}

TEST_CASE("verification metadata survives the round trip") {
  BilinearAlgorithm s = strassen();
  VerifyReport r = verify_random(s, 5, 1000003, 42);
  REQUIRE(r.ok);
  stamp(s, r);
  BilinearAlgorithm back = bilinear_from_json(to_json(s));
  REQUIRE(back.verified.has_value());
  CHECK(back.verified == s.verified);
  CHECK(back.verified->mode == "random");
  CHECK(back.verified->prime == 1000003);
  CHECK(back.verified->trials == 5);
  CHECK(back.verified->seed == 42);
  CHECK(back.verified->provenance == "verifier");
}

TEST_CASE("row tags of every kind survive the round trip") {
  BilinearAlgorithm gen = gen_new25(6);
  REQUIRE(gen.tags.size() == gen.t());
  BilinearAlgorithm gen_back = bilinear_from_json(to_json(gen));
  REQUIRE(gen_back.tags.size() == gen.tags.size());
  for (size_t i = 0; i < gen.tags.size(); ++i) {
    CAPTURE(i);
    CHECK(gen_back.tags[i].index() == gen.tags[i].index());
  }
  CHECK(to_json(gen_back) == to_json(gen));

  BilinearAlgorithm comp = compose(strassen(), strassen());
  BilinearAlgorithm comp_back = bilinear_from_json(to_json(comp));
  REQUIRE(comp_back.tags.size() == 49);
  const auto* tag = std::get_if<ComposedTag>(&comp_back.tags[8]);
  REQUIRE(tag != nullptr);
  CHECK(tag->left == 1);
  CHECK(tag->right == 1);
}

TEST_CASE("files written and reloaded are identical") {
  const fs::path dir = fs::temp_directory_path() / "tamm_io_test";
  fs::create_directories(dir);
  const fs::path first = dir / "a.json";
  const fs::path second = dir / "b.json";

  DecomposedAlgorithm dec = gen_new25_decomposed(6);
  save_algorithm(first, dec);
  LoadedAlgorithm loaded = load_algorithm(first);
  REQUIRE(std::holds_alternative<DecomposedAlgorithm>(loaded));
  save_algorithm(second, std::get<DecomposedAlgorithm>(loaded));
  CHECK(read_file(first) == read_file(second));

  fs::remove_all(dir);
}

TEST_CASE("loading a missing file reports an io error") {
  CHECK(tamm_test::fails_with(Errc::io, [] {
    load_algorithm("/nonexistent/path/algorithm.json");
  }));
}

TEST_CASE("minimal document parses") {
  BilinearAlgorithm one = bilinear_from_json(kTiny);
  CHECK(one.t() == 1);
  CHECK(one.U.to_dense().at(0, 0) == Rational(1));
  CHECK(one.tags.empty());
  CHECK_FALSE(one.verified.has_value());
}

TEST_CASE("parser rejects malformed documents") {
  using tamm_test::fails_with;
  auto rejects = [](const std::string& text) {
    return tamm_test::fails_with(Errc::parse, [&] { bilinear_from_json(text); });
  };

  CHECK(rejects("{ nope"));
  CHECK(rejects("[1, 2]"));
  CHECK(rejects(replaced(kTiny, "\"p\": 1,\n", "")));
  CHECK(rejects(replaced(kTiny, "\"rational\"", "\"float\"")));
  CHECK(rejects(replaced(kTiny, "\"m\": 1", "\"m\": -1")));
  CHECK(rejects(replaced(kTiny, "\"m\": 1", "\"m\": 0")));

  CHECK(rejects(replaced(kTiny, R"("U": [[0, 0, "1"]])", R"("U": [[0, 0, "1+2i"]])")));
  CHECK(rejects(replaced(kTiny, R"("U": [[0, 0, "1"]])", R"("U": [[0, 0, "0"]])")));
  CHECK(rejects(replaced(kTiny, R"("U": [[0, 0, "1"]])", R"("U": [[0, 0, "1"], [0, 0, "1"]])")));
  CHECK(rejects(replaced(kTiny, R"("U": [[0, 0, "1"]])", R"("U": [[1, 0, "1"]])")));
  CHECK(rejects(replaced(kTiny, R"("U": [[0, 0, "1"]])", R"("U": [[0, 0, 1]])")));

  CHECK(rejects(replaced(kTiny, R"("t": 1,)",
                         R"("t": 1, "tags": [{"kind": "untagged"}, {"kind": "untagged"}],)")));
  CHECK(rejects(replaced(kTiny, R"("t": 1,)", R"("t": 1, "tags": [{"kind": "zebra"}],)")));
  CHECK(rejects(replaced(kTiny, R"("W": [[0, 0, "1"]])",
                         R"("W": [[0, 0, "1"]],
  "verified": {"mode": "exact", "prime": "abc", "trials": 1, "seed": 1, "provenance": "x"})")));
}

TEST_CASE("tags parse back into the right alternatives") {
  const std::string text = replaced(
      kTiny, R"("t": 1,)",
      R"("t": 1, "tags": [{"kind": "agg", "table": 2, "triple": [1, 2, 3], "barred": true}],)");
  BilinearAlgorithm alg = bilinear_from_json(text);
  REQUIRE(alg.tags.size() == 1);
  const auto* tag = std::get_if<AggTag>(&alg.tags[0]);
  REQUIRE(tag != nullptr);
  CHECK(tag->table == 2);
  CHECK(tag->triple == std::array<int, 3>{1, 2, 3});
  CHECK(tag->barred);
}
