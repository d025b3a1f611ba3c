#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <limits>

#include "rgqda/error.hpp"
#include "rgqda/model_io.hpp"
#include "test_util.hpp"

using namespace rgqda;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("hex doubles round-trip bit for bit") {
  const double values[] = {0.0, -0.0, 1.0 / 3.0, 1e-310, std::numeric_limits<double>::max(), -2.5e17};
  for (double v : values) {
    const double back = parse_hex_double(hex_double(v));
    CHECK(std::signbit(back) == std::signbit(v));
    CHECK(back == v);
  }
  CHECK_THROWS_MATCHES(parse_hex_double("0x1.zz"), Error, test::KindIs(ErrorKind::ParseError));
}

TEST_CASE("model documents round-trip exactly") {
  Rng rng(1);
  std::vector<Matrix> classes;
  for (int k = 0; k < 3; ++k) {
    Matrix x = test::random_matrix(40, 3, rng);
    x *= 1.0 + k;
    x.array() += k;
    classes.push_back(x);
  }
  const LabeledDataset data = from_class_matrices(classes, {"setosa", "versi color", "v\"3"});
  EstimatorSpec spec = EstimatorSpec::of(EstimatorKind::MCD);
  spec.n_subsamples = 50;
  const ModelDocument doc{fit_gqda(data, spec, 9), {"sepal", "petal", "stem"}, "species"};

  const auto path = std::filesystem::temp_directory_path() / "rgqda_model_io_test.json";
  save_model(path, doc);
  const ModelDocument back = load_model(path);
  std::filesystem::remove(path);

  CHECK(back.feature_names == doc.feature_names);
  CHECK(back.label_column == "species");
  CHECK(back.model.classes() == doc.model.classes());
  CHECK(back.model.c_star() == doc.model.c_star());
  CHECK(back.model.estimator().kind == EstimatorKind::MCD);
  CHECK(back.model.estimator().n_subsamples == 50);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(back.model.fits()[k].location == doc.model.fits()[k].location);
    CHECK(back.model.fits()[k].scatter.matrix() == doc.model.fits()[k].scatter.matrix());
    CHECK(back.model.fits()[k].n_used == doc.model.fits()[k].n_used);
  }
  const Matrix probe = 3.0 * test::random_matrix(300, 3, rng);
  CHECK(classify_rows(probe, back.model) == classify_rows(probe, doc.model));
}

TEST_CASE("estimator settings parse from names and objects") {
  CHECK(estimator_from_json("SD").kind == EstimatorKind::SD);
  const EstimatorSpec s = estimator_from_json(nlohmann::json{{"name", "W"}, {"winsor_fraction", 0.2}});
  CHECK(s.kind == EstimatorKind::Winsorized);
  CHECK(s.winsor_fraction == 0.2);
  const EstimatorSpec back = estimator_from_json(estimator_to_json(s));
  CHECK(back.kind == s.kind);
  CHECK(back.winsor_fraction == s.winsor_fraction);
  CHECK_THROWS_WITH(estimator_from_json(nlohmann::json{{"name", "MCD"}, {"bogus", 1}}, "est"),
                    ContainsSubstring("est.bogus"));
}

TEST_CASE("malformed model documents are rejected") {
  CHECK_THROWS(model_from_json(nlohmann::json{{"format", "something-else"}}));
  CHECK_THROWS(load_model("/nonexistent/model.json"));
}
