#include <gtest/gtest.h>

#include "qfelab/channels.hpp"
#include "qfelab/haar.hpp"
#include "qfelab/serialize.hpp"

using namespace qfelab;

TEST(Serialize, PureStateRoundTrip) {
  SeededSampler s(1);
  const PureState psi = sample_haar_state(3, s);
  const PureState back = pure_state_from_json(to_json(psi));
  EXPECT_EQ(back.qubits(), 3);
  EXPECT_LT((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Serialize, DensityRoundTrip) {
  SeededSampler s(2);
  const DensityOperator rho = KrausChannel::random(2, 2, 3, s).apply(sample_haar_state(2, s).density());
  const DensityOperator back = density_from_json(to_json(rho));
  EXPECT_LT((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Serialize, RectangularChannelRoundTrip) {
  SeededSampler s(3);
  const KrausChannel ch = KrausChannel::random(3, 1, 4, s);
  const KrausChannel back = channel_from_json(to_json(ch));
  ASSERT_EQ(back.kraus_ops().size(), ch.kraus_ops().size());
  EXPECT_EQ(back.n_in(), 3);
  EXPECT_EQ(back.n_out(), 1);
  for (std::size_t i = 0; i < ch.kraus_ops().size(); ++i) {
    EXPECT_EQ(back.kraus_ops()[i].rows(), 2);
    EXPECT_EQ(back.kraus_ops()[i].cols(), 8);
    EXPECT_LT((back.kraus_ops()[i] - ch.kraus_ops()[i]).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Serialize, RejectsInvalidPayloads) {
  EXPECT_ANY_THROW(pure_state_from_json("{\"n\":1,\"re\":[1,1],\"im\":[0,0]}"));
  EXPECT_ANY_THROW(density_from_json("not json"));
}
