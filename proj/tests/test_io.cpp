#include "schmidt/io.hpp"
#include "schmidt/states.hpp"

#include <gtest/gtest.h>

using namespace schmidt;

namespace {

std::string expect_state_error(const std::string& text) {
  try {
    parse_state_text(text);
  } catch (const StateFileError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no StateFileError for: " << text;
  return "";
}

}  // namespace

TEST(StateFile, DensityRoundTripIsExactAndByteStable) {
  Rng rng = stream_rng(81, 0);
  const DensityOp r = random_mixed(DimVec{2, 3}, 3, rng);
  const std::string text = dump_state(encode_state("r", r, {}, Json{{"seed", 81}}));
  const LoadedState back = parse_state_text(text);
  ASSERT_FALSE(back.is_pure());
  EXPECT_EQ(back.name, "r");
  EXPECT_EQ(back.dims(), (DimVec{2, 3}));
  EXPECT_EQ(back.density().matrix(), r.matrix());
  EXPECT_EQ(back.metadata["seed"], 81);
  EXPECT_EQ(dump_state(encode_state(back.name, back.state, back.upb, back.metadata)), text);
}

TEST(StateFile, PureRoundTripAndUpb) {
  const ConstructedState c = construct({"tiles_state", {}});
  const std::string text = dump_state(encode_state(c.name, c.state, c.upb));
  const LoadedState back = parse_state_text(text);
  ASSERT_EQ(back.upb.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(back.upb[i].flatten(), c.upb[i].flatten());

  const PureState g = ghz(2, 3);
  const LoadedState gb = parse_state_text(dump_state(encode_state("g", g)));
  ASSERT_TRUE(gb.is_pure());
  EXPECT_EQ(std::get<PureState>(gb.state).amplitudes(), g.amplitudes());
}

TEST(StateFile, SingleWeightedKetBecomesPure) {
  const std::string text =
      R"({"format":1,"dims":[2,2],"kind":"kets","kets":[{"weight":0.5,"amplitudes":[[1,0],[0,0],[0,0],[1,0]]}]})";
  const LoadedState s = parse_state_text(text);
  ASSERT_TRUE(s.is_pure());
  EXPECT_NEAR(std::get<PureState>(s.state).norm(), 1.0, 1e-15);
}

TEST(StateFile, SeveralKetsBecomeDensity) {
  const std::string text =
      R"({"format":1,"dims":[2],"kind":"kets","kets":[{"weight":1,"amplitudes":[[1,0],[0,0]]},)"
      R"({"weight":3,"amplitudes":[[0,0],[1,0]]}]})";
  const LoadedState s = parse_state_text(text);
  ASSERT_FALSE(s.is_pure());
  EXPECT_NEAR(s.density().matrix()(1, 1).real(), 3.0, 0);
}

TEST(StateFile, ErrorsCarryJsonPointers) {
  EXPECT_NE(expect_state_error("{not json").find("malformed JSON"), std::string::npos);
  EXPECT_NE(expect_state_error(R"({"format":2,"dims":[2],"kind":"density"})").find("/format"), std::string::npos);
  EXPECT_NE(expect_state_error(R"({"format":1,"dims":[2,0],"kind":"density"})").find("/dims/1"), std::string::npos);
  EXPECT_NE(expect_state_error(R"({"format":1,"dims":[2],"kind":"mixed"})").find("/kind"), std::string::npos);
  EXPECT_NE(expect_state_error(R"({"format":1,"dims":[2],"kind":"density","matrix":[[[1,0],[0,0]]]})").find("/matrix"),
            std::string::npos);
  EXPECT_NE(expect_state_error(R"({"format":1,"dims":[2],"kind":"density","matrix":[[[1,0],[0,0]],[[0,0],"x"]]})")
                .find("/matrix/1"),
            std::string::npos);
  // Not Hermitian.
  EXPECT_NE(expect_state_error(R"({"format":1,"dims":[2],"kind":"density","matrix":[[[1,0],[1,0]],[[0,0],[1,0]]]})")
                .find("Hermitian"),
            std::string::npos);
  // Not positive.
  EXPECT_NE(expect_state_error(R"({"format":1,"dims":[2],"kind":"density","matrix":[[[1,0],[0,0]],[[0,0],[-1,0]]]})")
                .find("/matrix"),
            std::string::npos);
  EXPECT_NE(expect_state_error(R"({"format":1,"dims":[2],"kind":"kets","kets":[{"weight":-1,"amplitudes":[[1,0],[0,0]]}]})")
                .find("/kets/0/weight"),
            std::string::npos);
}

TEST(StateFile, OversizedDimsRejected) {
  EXPECT_THROW(parse_state_text(R"({"format":1,"dims":[64,128],"kind":"density","matrix":[]})"), CapacityError);
}

TEST(ResultJson, NonFiniteNumbersAreStrings) {
  EXPECT_EQ(num(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(num(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(num(std::nan("")), "nan");
  EXPECT_EQ(num(0.25), 0.25);
}

TEST(ResultJson, SnBoundShape) {
  SnBound b;
  b.lo = 2;
  b.hi = 3;
  b.exhausted = true;
  const Json j = to_json(b);
  EXPECT_EQ(j["lo"], 2);
  EXPECT_EQ(j["hi"], 3);
  EXPECT_EQ(j["exhausted"], true);
}
