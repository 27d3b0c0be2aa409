#include <doctest.h>

#include <algorithm>
#include <functional>

#include "edgelbp/descriptors.hpp"
#include "edgelbp/errors.hpp"
#include "edgelbp/glcm.hpp"
#include "edgelbp/lbp.hpp"
#include "support.hpp"

using namespace edgelbp;
using namespace edgelbp::testing;

namespace {

GrayImage fixture_image(std::uint64_t seed) {
  Rng rng(seed);
  GrayImage g = to_gray_image(pad<bool>(random_blob(rng, 30, 26), 3, 3, 3, 3, false));
  // light texture on top of the shape
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    g.data()[i] = static_cast<std::uint8_t>(g.data()[i] == 0 ? rng.below(60) : 195 + rng.below(60));
  }
  return g;
}

Errc error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return Errc::IoError;
}

}  // namespace

TEST_CASE("scheme table") {
  CHECK(scheme_dims(Scheme::Edms) == 22);
  CHECK(scheme_dims(Scheme::Lbp) == 256);
  CHECK(scheme_dims(Scheme::Glcm) == 28);
  CHECK(scheme_dims(Scheme::Moment) == 7);
  CHECK(scheme_dims(Scheme::Proposed) == 278);
  CHECK(scheme_dims(Scheme::GlcmEdms) == 50);
  CHECK(scheme_dims(Scheme::LbpMoment) == 263);
  for (Scheme s : kAllSchemes) {
    CHECK(parse_scheme(scheme_name(s)) == s);
    int sum = 0;
    for (Scheme p : scheme_parts(s)) sum += scheme_dims(p);
    CHECK(sum == scheme_dims(s));
  }
  CHECK(parse_scheme("glcm_edms") == Scheme::GlcmEdms);
  CHECK(parse_scheme("Proposed") == Scheme::Proposed);
  CHECK_FALSE(parse_scheme("SIFT").has_value());
  CHECK(scheme_parts(Scheme::Proposed) == std::vector<Scheme>{Scheme::Edms, Scheme::Lbp});
  CHECK(scheme_parts(Scheme::GlcmEdms) == std::vector<Scheme>{Scheme::Glcm, Scheme::Edms});
  CHECK(scheme_parts(Scheme::LbpMoment) == std::vector<Scheme>{Scheme::Lbp, Scheme::Moment});
}

TEST_CASE("extract") {
  SUBCASE("dimensions and finiteness") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const GrayImage g = fixture_image(seed);
      for (Scheme s : kAllSchemes) {
        const FeatureVector v = extract(g, s);
        CHECK(v.scheme == s);
        CHECK(v.dims() == scheme_dims(s));
        CHECK(v.values.allFinite());
      }
    }
  }
  SUBCASE("blank image") {
    const FeatureVector v = extract(GrayImage::Constant(20, 20, 255), Scheme::Proposed);
    CHECK(v.values.head(22).isZero(0.0));
    CHECK(v.values(22 + 255) == 1.0);
    CHECK(v.values.tail(256).sum() == 1.0);
  }
  SUBCASE("composites are concatenations") {
    const GrayImage g = fixture_image(7);
    const BinaryImage b = binarize_otsu(g);
    const Eigen::VectorXd edms = edms_descriptor(b).to_vector();
    const Eigen::VectorXd lbp = lbp_histogram(g);
    const Eigen::VectorXd glcm = glcm_descriptor(g, 16);
    const Eigen::VectorXd moment = moment_descriptor(b);

    const FeatureVector p = extract(g, Scheme::Proposed);
    CHECK(p.values.head(22) == edms);
    CHECK(p.values.tail(256) == lbp);
    CHECK(p.values.head(22) == extract(g, Scheme::Edms).values);
    CHECK(p.values.tail(256) == extract(g, Scheme::Lbp).values);

    const FeatureVector ge = extract(g, Scheme::GlcmEdms);
    CHECK(ge.values.head(28) == glcm);
    CHECK(ge.values.tail(22) == edms);

    const FeatureVector lm = extract(g, Scheme::LbpMoment);
    CHECK(lm.values.head(256) == lbp);
    CHECK(lm.values.tail(7) == moment);
  }
  SUBCASE("extraction options") {
    const GrayImage g = fixture_image(9);
    ExtractionConfig cfg;
    cfg.glcm_levels = 8;
    CHECK(extract(g, Scheme::Glcm, cfg).values == glcm_descriptor(g, 8));
    cfg.moment_scaling = MomentScaling::Raw;
    CHECK(extract(g, Scheme::Moment, cfg).values == moment_descriptor(binarize_otsu(g), MomentScaling::Raw));
    cfg.glcm_levels = 1;
    CHECK(error_code([&] { extract(g, Scheme::Glcm, cfg); }) == Errc::InvalidArgument);
  }
}

TEST_CASE("normalizer") {
  SUBCASE("identical vectors") {
    Eigen::VectorXd v(22);
    v.setLinSpaced(0.0, 1.0);
    const std::vector<FeatureVector> train = {{Scheme::Edms, v}, {Scheme::Edms, v}};
    const Normalizer n = fit_normalizer(train);
    CHECK(n.mean == v);
    CHECK(n.stddev == Eigen::VectorXd::Ones(22));
    CHECK(apply_normalizer(n, train[0]).values.isZero(0.0));
  }
  SUBCASE("two-point population statistics") {
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(2, 7);
    rows(1, 0) = 2.0;
    const Normalizer n = fit_normalizer(Scheme::Moment, rows);
    CHECK(n.mean(0) == 1.0);
    CHECK(n.stddev(0) == 1.0);
  }
  SUBCASE("errors") {
    CHECK(error_code([] { fit_normalizer(std::span<const FeatureVector>{}); }) == Errc::InvalidArgument);
    const std::vector<FeatureVector> mixed = {{Scheme::Moment, Eigen::VectorXd::Zero(7)},
                                              {Scheme::Edms, Eigen::VectorXd::Zero(22)}};
    CHECK(error_code([&] { fit_normalizer(mixed); }) == Errc::SchemeMismatch);
    const Normalizer n = fit_normalizer(Scheme::Moment, Eigen::MatrixXd::Random(5, 7));
    CHECK(error_code([&] { apply_normalizer(n, FeatureVector{Scheme::Edms, Eigen::VectorXd::Zero(22)}); }) ==
          Errc::SchemeMismatch);
    CHECK(error_code([&] { apply_normalizer(n, FeatureVector{Scheme::Moment, Eigen::VectorXd::Zero(6)}); }) ==
          Errc::SchemeMismatch);
  }
  SUBCASE("apply, invert and train-set statistics") {
    Rng rng(61);
    Eigen::MatrixXd rows(40, 7);
    for (Eigen::Index i = 0; i < rows.size(); ++i) rows.data()[i] = rng.uniform(-50.0, 300.0) * (1 + i % 3);
    rows.col(4).setConstant(3.5);
    const Normalizer n = fit_normalizer(Scheme::Moment, rows);
    CHECK(n.stddev(4) == 1.0);
    const Eigen::MatrixXd z = apply_normalizer(n, rows);
    CHECK((z.colwise().mean().array().abs() <= 1e-9).all());
    const FeatureVector v{Scheme::Moment, rows.row(3).transpose()};
    const FeatureVector back = invert_normalizer(n, apply_normalizer(n, v));
    CHECK((back.values - v.values).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, v.values.cwiseAbs().maxCoeff()));
    CHECK(apply_normalizer(n, FeatureVector{Scheme::Moment, n.mean}).values.isZero(0.0));
  }
  SUBCASE("json round trip") {
    Rng rng(62);
    Eigen::MatrixXd rows(6, 22);
    for (Eigen::Index i = 0; i < rows.size(); ++i) rows.data()[i] = rng.uniform() / 3.0;
    const Normalizer n = fit_normalizer(Scheme::Edms, rows);
    const Normalizer m = Normalizer::from_json(n.to_json());
    CHECK(m.scheme == n.scheme);
    CHECK(m.mean == n.mean);
    CHECK(m.stddev == n.stddev);
  }
}

TEST_CASE("feature csv") {
  std::vector<FeatureRow> rows;
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    rows.push_back({"shape/" + std::to_string(seed) + ".png", "shape", extract(fixture_image(seed), Scheme::Moment)});
  }
  const std::string csv = format_feature_csv(Scheme::Moment, rows);
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header == "sample_id,label,scheme,f0,f1,f2,f3,f4,f5,f6");
  const std::string first = csv.substr(header.size() + 1, csv.find('\n', header.size() + 1) - header.size() - 1);
  CHECK(std::count(first.begin(), first.end(), ',') == 2 + 7);
  CHECK(first.rfind("shape/11.png,shape,MOMENT,", 0) == 0);

  const auto parsed = parse_feature_csv(csv);
  REQUIRE(parsed.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(parsed[i].sample_id == rows[i].sample_id);
    CHECK(parsed[i].label == rows[i].label);
    CHECK(parsed[i].features.scheme == Scheme::Moment);
    for (Eigen::Index k = 0; k < 7; ++k) {
      CHECK(parsed[i].features.values(k) == doctest::Approx(rows[i].features.values(k)).epsilon(1e-8));
    }
  }
  CHECK(format_feature_csv(Scheme::Moment, parsed) == csv);
  CHECK(error_code([] { parse_feature_csv("garbage"); }) == Errc::InvalidArgument);
  // MOMENT rows need seven values
  CHECK_THROWS_AS(parse_feature_csv("sample_id,label,scheme,f0\na,b,MOMENT,1\n"), Error);
}
