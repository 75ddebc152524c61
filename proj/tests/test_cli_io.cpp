#include "gcf/bodies.hpp"
#include "gcf/error.hpp"
#include "gcf/io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace gcf;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ContractError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, ParsesKeyValueLines) {
  const auto c = parse_config("alpha=1.0\nn=2");
  EXPECT_EQ(c.get_double("alpha", 0.0), 1.0);
  EXPECT_EQ(c.get_long("n", 0), 2);
  const auto d = parse_config("# comment\n\n  alpha = 0.5  # trailing\nseed=42\nout_dir=x\n");
  EXPECT_EQ(d.get_double("alpha", 0.0), 0.5);
  EXPECT_EQ(d.seed, 42u);
  EXPECT_EQ(d.out_dir, "x");
}

TEST(Config, RangeErrorsCarryLineContext) {
  EXPECT_THROW(parse_config("alpha=-1"), ContractError);
  EXPECT_NE(message_of([] { parse_config("n=2\nalpha=-1", "run.cfg"); }).find("run.cfg:2"),
            std::string::npos);
  EXPECT_NE(message_of([] { parse_config("bogus=1"); }).find("unknown key"), std::string::npos);
  EXPECT_NE(message_of([] { parse_config("alpha"); }).find("malformed"), std::string::npos);
  EXPECT_THROW(parse_config("n=3"), ContractError);
  EXPECT_THROW(parse_config("cfl=1.5"), ContractError);
  EXPECT_THROW(parse_config("alpha=nan"), ContractError);
  EXPECT_THROW(parse_config("seed=-3"), ContractError);
  EXPECT_THROW(parse_config("max_steps=2.5"), ContractError);
  EXPECT_THROW(parse_config("initial=cube"), ContractError);
  EXPECT_THROW(parse_config("resolution=8"), ContractError);
}

TEST(Config, FlagsOverrideFile) {
  auto c = parse_config("alpha=1.0");
  set_option(c, "alpha", "1.5", "--alpha");
  EXPECT_EQ(c.get_double("alpha", 0.0), 1.5);
  EXPECT_NE(message_of([&] { set_option(c, "alpha", "0", "--alpha"); }).find("--alpha"),
            std::string::npos);
}

TEST(Config, Resolution) {
  EXPECT_EQ(parse_resolution("64"), std::vector<int>{64});
  EXPECT_EQ(parse_resolution("48x96"), (std::vector<int>{48, 96}));
  EXPECT_EQ(parse_resolution("48,96"), (std::vector<int>{48, 96}));
  EXPECT_THROW(parse_resolution("1x2x3"), ContractError);
  EXPECT_THROW(flow_config(parse_config("n=1\nresolution=48x96")), ContractError);
}

TEST(Config, FlowDefaults) {
  const auto one = flow_config(parse_config("n=1"));
  EXPECT_EQ(one.resolution, std::vector<int>{256});
  EXPECT_EQ(one.initial, InitialBody::Perturbed);
  const auto two = flow_config(parse_config("n=2\nnormalization=none\naxes=2,1,0.5"));
  EXPECT_EQ(two.resolution, (std::vector<int>{48, 96}));
  EXPECT_EQ(two.normalization, Normalization::None);
  EXPECT_EQ(two.axes[2], 0.5);
}

TEST(Series, RoundTripIsBitIdentical) {
  std::vector<DiagnosticsRecord> recs(3);
  for (int i = 0; i < 3; ++i) {
    auto& r = recs[i];
    r.step = 1000 * i;
    r.t = 0.1 * i + 1.0 / 3.0;
    r.volume = M_PI * (1.0 + i);
    r.k_min = 1e-300;
    r.k_max = 1.7976931348623157e308;
    r.lambda_ratio = std::nextafter(1.0, 2.0);
    r.lambda_max = -0.0;
    r.residual_max = 5e-324;
    r.f_max = 1.5;
    r.w_max = 0.75;
    r.umbilicity_at_fmax = 1e-17;
    r.grad_x_norm2_at_fmax = 123456789.123456789;
  }
  const auto text = format_series(recs);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.substr(0, text.find('\n')), kSeriesHeader);
  const auto back = parse_series(text);
  ASSERT_EQ(back.size(), recs.size());
  EXPECT_EQ(format_series(back), text);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].t, recs[i].t);
    EXPECT_EQ(back[i].lambda_ratio, recs[i].lambda_ratio);
    EXPECT_EQ(back[i].residual_max, recs[i].residual_max);
    EXPECT_EQ(back[i].grad_x_norm2_at_fmax, recs[i].grad_x_norm2_at_fmax);
  }
  EXPECT_THROW(format_series({}), ContractError);
  EXPECT_THROW(parse_series("step,t\n"), ContractError);
}

TEST(Series, EmitSurfacesIoErrors) {
  std::vector<DiagnosticsRecord> recs(1);
  EXPECT_THROW(emit_series("/nonexistent-dir/series.csv", recs), Error);
  const auto dir = std::filesystem::temp_directory_path() / "gcf_series_test";
  std::filesystem::create_directories(dir);
  emit_series(dir / "s.csv", recs);
  std::ifstream in(dir / "s.csv", std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), format_series(recs));
}

TEST(Snapshot, RoundTrip) {
  const auto g = build_grid(2, {16, 32});
  Snapshot s{ellipsoid_body(g, {1.3, 1.0, 0.8}), 1.25, 0.5};
  const auto text = format_snapshot(s);
  EXPECT_NE(text.find(kSnapshotVersion), std::string::npos);
  const auto back = parse_snapshot(text);
  EXPECT_EQ(back.body.h, s.body.h);
  EXPECT_EQ(back.body.grid.n_colatitude(), 16);
  EXPECT_EQ(back.body.grid.n_longitude(), 32);
  EXPECT_EQ(back.alpha, 1.25);
  EXPECT_EQ(back.time, 0.5);
  EXPECT_EQ(format_snapshot(back), text);
}

TEST(Series, OneRecordIsTwoLines) {
  const auto text = format_series(std::vector<DiagnosticsRecord>(1));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(Snapshot, UnitCircleSixteenNodes) {
  const auto back = parse_snapshot(format_snapshot({sphere_body(build_grid(1, {16})), 1.0, 0.0}));
  ASSERT_EQ(back.body.h.size(), 16u);
  for (double h : back.body.h) EXPECT_EQ(h, 1.0);
}

TEST(Snapshot, UnitSphereOnSmallGrid) {
  const auto g = build_grid(2, {16, 32});
  const auto back = parse_snapshot(format_snapshot({sphere_body(g), std::nullopt, std::nullopt}));
  EXPECT_EQ(back.body.h.size(), 512u);
  for (double h : back.body.h) EXPECT_EQ(h, 1.0);
  EXPECT_FALSE(back.alpha);
  EXPECT_FALSE(back.time);
}

TEST(Snapshot, RejectsBadInput) {
  EXPECT_THROW(parse_snapshot("{"), ContractError);
  EXPECT_THROW(parse_snapshot(R"({"version":"other","n":1,"grid":{"shape":[16]},"h":[]})"),
               ContractError);
  EXPECT_THROW(
      parse_snapshot(R"({"version":"gcf-snapshot-1","n":1,"grid":{"shape":[16],"offsets":[0]},"h":[1,2]})"),
      ContractError);
  EXPECT_EQ(snapshot_name(200), "snapshot_000200.json");
}

TEST(Output, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}
