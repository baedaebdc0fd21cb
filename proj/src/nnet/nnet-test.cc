// src/nnet/nnet-test.cc

// Copyright 2026  The AVST Authors

// See the top-level LICENSE file for the full license text.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <numeric>

#include "avst/base/error.h"
#include "avst/base/random.h"
#include "avst/nnet/dnn.h"
#include "avst/nnet/frame-dataset.h"
#include "avst/nnet/model-io.h"
#include "avst/nnet/train.h"
#include "doctest.h"
#include "nnet-checks.h"

namespace avst {
namespace {

using testing::RandomBatch;
using testing::ToySpec;

bool SameParameters(const DnnParameters<float> &a, const DnnParameters<float> &b) {
  if (!a.SameShape(b)) return false;
  std::vector<const float *> pa, pb;
  std::vector<Eigen::Index> sizes;
  a.ForEach([&](const auto &m) {
    pa.push_back(m.data());
    sizes.push_back(m.size());
  });
  b.ForEach([&](const auto &m) { pb.push_back(m.data()); });
  for (size_t i = 0; i < pa.size(); ++i)
    if (std::memcmp(pa[i], pb[i], sizeof(float) * sizes[i]) != 0) return false;
  return true;
}

FrameDataset ToyDataset(int frames, int dim, int labels, uint64_t seed) {
  Rng rng(seed);
  FrameDataset d;
  d.num_speakers = 2;
  d.acoustic.resize(frames, dim);
  Eigen::MatrixXd centres(labels, dim);
  for (Eigen::Index i = 0; i < centres.size(); ++i) centres(i) = 2.0 * StandardNormal(rng);
  for (int f = 0; f < frames; ++f) {
    const int y = static_cast<int>(UniformIndex(rng, labels));
    for (int c = 0; c < dim; ++c)
      d.acoustic(f, c) = static_cast<float>(centres(y, c) + 0.3 * StandardNormal(rng));
    d.label.push_back(y);
    d.speaker.push_back(f % 2);
    d.utterance.push_back(f / 10);
    d.visual_row.push_back(-1);
  }
  return d;
}

}  // namespace

TEST_CASE("initialization shapes follow the architecture") {
  ArchitectureSpec big = ToySpec(Modality::kA, FusionVariant::kNone, 2048, 42);
  big.identity_dim = 34;
  const DnnModel a = InitModel<float>(big, 1);
  REQUIRE(a.params.hidden.size() == 4);
  CHECK(a.params.hidden[0].weight.rows() == 2048);
  CHECK(a.params.hidden[0].weight.cols() == 440);
  for (int k = 1; k < 4; ++k) CHECK(a.params.hidden[k].weight.cols() == 2048);
  CHECK(a.params.output.weight.rows() == 42);
  CHECK(a.params.output.bias.size() == 42);

  ArchitectureSpec c = big;
  c.modality = Modality::kAI;
  c.variant = FusionVariant::kC;
  const DnnModel mc = InitModel<float>(c, 1);
  CHECK(mc.params.hidden[0].weight.cols() == 440);
  CHECK(mc.params.hidden[1].weight.cols() == 2048 + 34);
  CHECK(mc.params.hidden[2].weight.cols() == 2048);

  struct Case {
    Modality m;
    FusionVariant v;
    int first_cols;
  };
  for (const Case &k : {Case{Modality::kAV, FusionVariant::kNone, 2240},
                        Case{Modality::kAI, FusionVariant::kA, 474},
                        Case{Modality::kAVI, FusionVariant::kA, 2274},
                        Case{Modality::kAI, FusionVariant::kB, 448},
                        Case{Modality::kAVI, FusionVariant::kB, 2248}}) {
    const DnnModel m = InitModel<float>(ToySpec(k.m, k.v), 3);
    CHECK(m.params.hidden[0].weight.cols() == k.first_cols);
    CHECK(m.params.embedding.has_value() == (k.v == FusionVariant::kB));
  }

  const DnnModel again = InitModel<float>(big, 1);
  CHECK(SameParameters(a.params, again.params));
  CHECK(!SameParameters(a.params, InitModel<float>(big, 2).params));

  ArchitectureSpec bad = big;
  bad.variant = FusionVariant::kC;
  CHECK_THROWS_AS(InitModel<float>(bad, 1), UsageError);
  bad = c;
  bad.injection_layer = 4;
  CHECK_THROWS_AS(InitModel<float>(bad, 1), UsageError);
}

TEST_CASE("forward pass") {
  SUBCASE("zero parameters give uniform posteriors") {
    const ArchitectureSpec spec = ToySpec(Modality::kAV, FusionVariant::kNone, 8, 5);
    DnnModel m = InitModel<float>(spec, 1);
    m.params = m.params.Filled(0.0f);
    const Mat<float> p = Forward(m, RandomBatch<float>(spec, 6, 2));
    CHECK((p.array() - 0.2f).abs().maxCoeff() == 0.0f);
    CHECK(Loss(m, RandomBatch<float>(spec, 6, 2)) == doctest::Approx(std::log(5.0)).epsilon(1e-7));
  }

  SUBCASE("rows sum to one for every architecture") {
    for (const auto &[m, v] : testing::AllArchitectures()) {
      const ArchitectureSpec spec = ToySpec(m, v, 16, 7);
      const DnnModel model = InitModel<float>(spec, 5);
      Batch<float> b = RandomBatch<float>(spec, 50, 6);
      b.input *= 30.0f;  // large logits
      const Mat<float> p = Forward(model, b);
      CHECK(p.allFinite());
      CHECK((p.rowwise().sum().array() - 1.0f).abs().maxCoeff() <= 1e-6f);
    }
  }

  SUBCASE("hand-computed two-unit network") {
    ArchitectureSpec spec;
    spec.num_hidden_layers = 1;
    spec.hidden_width = 2;
    spec.output_labels = 2;
    spec.acoustic_dim = 2;
    BasicDnnModel<double> m = InitModel<double>(spec, 1);
    m.params.hidden[0].weight << 1, 2, -1, 1;
    m.params.hidden[0].bias << 0.5, -3;
    m.params.output.weight << 1, 0, 0.5, 2;
    m.params.output.bias << 0, 1;
    Batch<double> b;
    b.input.resize(1, 2);
    b.input << 1, 1;
    b.labels = {1};
    // h = relu([3.5, -3]) = [3.5, 0]; logits = [3.5, 2.75].
    const double z0 = 3.5, z1 = 2.75;
    const double p1 = std::exp(z1) / (std::exp(z0) + std::exp(z1));
    const Mat<double> p = Forward(m, b);
    CHECK(p(0, 1) == doctest::Approx(p1).epsilon(1e-14));
    CHECK(Loss(m, b) == doctest::Approx(-std::log(p1)).epsilon(1e-14));
  }

  SUBCASE("confident correct model has vanishing loss") {
    ArchitectureSpec spec;
    spec.num_hidden_layers = 1;
    spec.hidden_width = 2;
    spec.output_labels = 2;
    spec.acoustic_dim = 2;
    BasicDnnModel<double> m = InitModel<double>(spec, 1);
    m.params.hidden[0].weight.setIdentity();
    m.params.output.weight = 100.0 * Mat<double>::Identity(2, 2);
    Batch<double> b;
    b.input.resize(2, 2);
    b.input << 1, 0, 0, 1;
    b.labels = {0, 1};
    CHECK(Loss(m, b) < 1e-40);
  }

  SUBCASE("shape errors") {
    const ArchitectureSpec spec = ToySpec(Modality::kAI, FusionVariant::kB);
    const DnnModel m = InitModel<float>(spec, 1);
    Batch<float> b = RandomBatch<float>(spec, 3, 1);
    b.identity.resize(0, 0);
    CHECK_THROWS_AS(Forward(m, b), DataError);
    Batch<float> narrow = RandomBatch<float>(spec, 3, 1);
    narrow.input.conservativeResize(3, 100);
    CHECK_THROWS_AS(Forward(m, narrow), DataError);
  }
}

TEST_CASE("softmax stays normalized on many random frames") {
  const ArchitectureSpec spec = ToySpec(Modality::kAI, FusionVariant::kA, 32, 6);
  const DnnModel m = InitModel<float>(spec, 9);
  const FeatureMatrix p = PredictPosteriors(m, RandomBatch<float>(spec, 10000, 10));
  CHECK(p.rows() == 10000);
  CHECK((p.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-6);
  CHECK(p.minCoeff() >= 0.0);
}

TEST_CASE("forward pass is equivariant to row permutations") {
  const ArchitectureSpec spec = ToySpec(Modality::kAVI, FusionVariant::kC, 16, 5);
  const DnnModel m = InitModel<float>(spec, 4);
  const Batch<float> b = RandomBatch<float>(spec, 40, 5);
  Rng rng(6);
  const std::vector<int> perm = RandomPermutation(rng, 40);
  Batch<float> pb = b;
  for (int r = 0; r < 40; ++r) {
    pb.input.row(r) = b.input.row(perm[r]);
    pb.identity.row(r) = b.identity.row(perm[r]);
  }
  const Mat<float> p = Forward(m, b), pp = Forward(m, pb);
  for (int r = 0; r < 40; ++r) REQUIRE((pp.row(r) - p.row(perm[r])).cwiseAbs().maxCoeff() == 0.0f);
}

TEST_CASE("backprop matches central differences for every architecture") {
  for (const auto &[m, v] : testing::AllArchitectures()) {
    const testing::GradientReport r = testing::CheckGradients(ToySpec(m, v), 11);
    INFO(testing::ArchName(m, v), " max relative error ", r.max_rel_error);
    CHECK(r.num_checked > 3500);
    CHECK(r.max_rel_error < 1e-4);
  }
}

TEST_CASE("sgd update") {
  const ArchitectureSpec spec = ToySpec(Modality::kAI, FusionVariant::kB);
  DnnModel m = InitModel<float>(spec, 1);
  const Batch<float> b = RandomBatch<float>(spec, 8, 2);
  DnnParameters<float> g;
  LossAndGradients(m, b, &g);

  DnnModel same = m;
  SgdStep(&same, g, 0.0f);
  CHECK(SameParameters(same.params, m.params));

  DnnModel zero = m;
  zero.params = m.params.Filled(0.0f);
  SgdStep(&zero, m.params.Filled(2.0f), 0.01f);
  zero.params.ForEach([](const auto &p) { CHECK((p.array() == -0.02f).all()); });

  DnnModel step = m;
  SgdStep(&step, g, 0.01f);
  CHECK(Loss(step, b) < Loss(m, b));

  const DnnModel other = InitModel<float>(ToySpec(Modality::kA, FusionVariant::kNone), 1);
  CHECK_THROWS_AS(SgdStep(&step, other.params, 0.01f), DataError);

  // A mask of zeros freezes everything.
  DnnModel frozen = m;
  const DnnParameters<float> mask = m.params.Filled(0.0f);
  SgdStep(&frozen, g, 0.5f, &mask);
  CHECK(SameParameters(frozen.params, m.params));
}

TEST_CASE("identity extension preserves the parent") {
  for (Modality base : {Modality::kA, Modality::kAV}) {
    const DnnModel si = InitModel<float>(ToySpec(base, FusionVariant::kNone, 64, 6), 21);
    for (FusionVariant v : {FusionVariant::kA, FusionVariant::kB, FusionVariant::kC}) {
      IdentityExtension ext;
      ext.variant = v;
      ext.num_speakers = 34;
      ext.seed = 3;
      INFO(ModalityName(base), " ", VariantName(v));
      CHECK(testing::ExtensionMaxAbsDiff(si, ext, 1000, 22) == 0.0f);
      ext.append_hidden_layer = true;
      CHECK(testing::ExtensionArgmaxAgreement(si, ext, 1000, 23) >= 0.99);
    }
  }
  const DnnModel si = InitModel<float>(ToySpec(Modality::kA, FusionVariant::kNone), 1);
  IdentityExtension ext;
  ext.variant = FusionVariant::kA;
  const DnnModel a = ExtendForIdentity(si, ext);
  CHECK(a.spec.modality == Modality::kAI);
  CHECK(a.params.hidden[0].weight.cols() == 474);
  CHECK(a.params.hidden[0].weight.rightCols(34).cwiseAbs().maxCoeff() == 0.0f);
  CHECK_THROWS_AS(ExtendForIdentity(a, ext), UsageError);
  ext.variant = FusionVariant::kNone;
  CHECK_THROWS_AS(ExtendForIdentity(si, ext), UsageError);

  ext.variant = FusionVariant::kB;
  ext.embed_dim = 8;
  const DnnModel b = ExtendForIdentity(si, ext);
  const DnnParameters<float> mask = NewParameterMask(b, si.spec);
  CHECK(mask.embedding->weight.minCoeff() == 1.0f);
  CHECK(mask.hidden[0].weight.leftCols(440).maxCoeff() == 0.0f);
  CHECK(mask.hidden[0].weight.rightCols(8).minCoeff() == 1.0f);
  CHECK(mask.output.weight.maxCoeff() == 0.0f);
}

TEST_CASE("identity pathway learns speaker-dependent labels") {
  // Labels depend only on the speaker, so the parent cannot beat chance while
  // the extended model can.
  for (FusionVariant v : {FusionVariant::kA, FusionVariant::kB, FusionVariant::kC}) {
    FrameDataset d = ToyDataset(400, 6, 2, 5);
    d.acoustic.setRandom();
    for (int f = 0; f < d.NumFrames(); ++f) d.label[f] = d.speaker[f];
    ArchitectureSpec spec = ToySpec(Modality::kA, FusionVariant::kNone, 16, 2);
    spec.acoustic_dim = 6;
    const DnnModel si = InitModel<float>(spec, 2);
    IdentityExtension ext;
    ext.variant = v;
    ext.num_speakers = 2;
    ext.embed_dim = 4;
    TrainConfig cfg;
    cfg.learning_rate = 0.1;
    cfg.batch_size = 32;
    cfg.max_epochs = 60;
    cfg.patience = 60;
    const DnnModel ext_model = ExtendForIdentity(si, ext);
    const TrainResult r = TrainModel(ext_model, d, d, cfg);
    INFO(VariantName(v));
    CHECK(Evaluate(r.model, d).accuracy > 0.95);
  }
}

TEST_CASE("near-identity layer") {
  const DnnModel si = InitModel<float>(ToySpec(Modality::kAV, FusionVariant::kNone, 16, 5), 1);
  const DnnModel deeper = AppendNearIdentityLayer(si, 1e-3, 4);
  CHECK(deeper.spec.num_hidden_layers == 5);
  const Mat<float> &w = deeper.params.hidden[4].weight;
  CHECK((w - Mat<float>::Identity(16, 16)).cwiseAbs().maxCoeff() <= 1e-3f);
  CHECK((w - Mat<float>::Identity(16, 16)).cwiseAbs().maxCoeff() > 0.0f);
}

TEST_CASE("predict matches per-row forward") {
  const ArchitectureSpec spec = ToySpec(Modality::kAVI, FusionVariant::kB, 16, 5);
  const DnnModel m = InitModel<float>(spec, 8);
  const Batch<float> b = RandomBatch<float>(spec, 20, 9);
  const FeatureMatrix all = PredictPosteriors(m, b);
  for (int r = 0; r < 20; ++r) {
    Batch<float> one{b.input.row(r), b.identity.row(r), {}};
    const Mat<float> p = Forward(m, one);
    REQUIRE((all.row(r) - p.cast<double>()).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("model files") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "avst-nnet-test.dnnm";
  for (const auto &[mod, v] : testing::AllArchitectures()) {
    DnnModel m = InitModel<float>(ToySpec(mod, v, 8, 5), 3);
    m.priors = Eigen::VectorXd::Constant(5, static_cast<float>(0.2));
    m.provenance = "st:" + VariantName(v);
    SaveModel(path.string(), m);
    const DnnModel back = LoadModel(path.string(), m.spec);
    CHECK(back.spec == m.spec);
    CHECK(SameParameters(back.params, m.params));
    CHECK(*back.priors == *m.priors);
    CHECK(back.provenance == m.provenance);
    CHECK(SerializeModel(back) == SerializeModel(m));
  }
  const DnnModel m = InitModel<float>(ToySpec(Modality::kA, FusionVariant::kNone, 8, 5), 3);
  const std::string bytes = SerializeModel(m);
  try {
    DeserializeModel(bytes, "mem");
    ArchitectureSpec other = m.spec;
    other.hidden_width = 9;
    SaveModel(path.string(), m);
    LoadModel(path.string(), other);
    FAIL("expected a spec mismatch");
  } catch (const DataError &e) {
    const std::string msg = e.what();
    CHECK(msg.find("hidden=4x8") != std::string::npos);
    CHECK(msg.find("hidden=4x9") != std::string::npos);
  }
  CHECK_THROWS_AS(DeserializeModel(bytes.substr(0, bytes.size() - 3), "mem"), DataError);
  std::string bad = bytes;
  bad[0] = 'Z';
  CHECK_THROWS_AS(DeserializeModel(bad, "mem"), DataError);
  CHECK_THROWS_AS(DeserializeModel(bytes + "x", "mem"), DataError);
  fs::remove(path);
}

TEST_CASE("batch assembly") {
  FrameDataset d = ToyDataset(5, 3, 2, 1);
  d.num_speakers = 4;
  d.speaker = {0, 1, 2, 3, 1};
  d.visual.resize(2, 2);
  d.visual << 10, 11, 20, 21;
  d.visual_row = {0, 0, 1, 1, 1};
  ArchitectureSpec spec;
  spec.modality = Modality::kAVI;
  spec.variant = FusionVariant::kA;
  spec.acoustic_dim = 3;
  spec.visual_dim = 2;
  spec.identity_dim = 4;
  const std::vector<int> frames = {4, 2};
  Batch<float> b;
  FillBatch(d, spec, frames, &b);
  REQUIRE(b.input.cols() == 9);
  CHECK(b.input.row(0).head(3) == d.acoustic.row(4));
  CHECK(b.input(0, 3) == 20);
  CHECK(b.input(0, 4) == 21);
  CHECK(b.input.row(0).tail(4) == Eigen::RowVector4f(0, 1, 0, 0));
  CHECK(b.input.row(1).tail(4) == Eigen::RowVector4f(0, 0, 1, 0));
  CHECK(b.labels == std::vector<int>{d.label[4], d.label[2]});
  CHECK(b.identity.size() == 0);

  spec.variant = FusionVariant::kC;
  spec.modality = Modality::kAI;
  FillBatch(d, spec, frames, &b);
  CHECK(b.input.cols() == 3);
  CHECK(b.identity.row(0) == Eigen::RowVector4f(0, 1, 0, 0));

  spec.acoustic_dim = 4;
  CHECK_THROWS_AS(FillBatch(d, spec, frames, &b), DataError);

  const Eigen::VectorXd pri = EstimatePriors(d, 2);
  CHECK(pri.sum() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(pri.minCoeff() > 0.0);

  const FrameDataset sel = SelectFrames(d, frames);
  CHECK(sel.NumFrames() == 2);
  CHECK(sel.visual.rows() == 1);
  CHECK(sel.visual_row == std::vector<int>{0, 0});
  CHECK(d.FramesOfSpeaker(1) == std::vector<int>{1, 4});
}

TEST_CASE("training") {
  const FrameDataset train = ToyDataset(300, 5, 3, 1), valid = ToyDataset(100, 5, 3, 1);
  ArchitectureSpec spec;
  spec.acoustic_dim = 5;
  spec.hidden_width = 16;
  spec.output_labels = 3;
  TrainConfig cfg;
  cfg.max_epochs = 15;
  cfg.batch_size = 32;
  const DnnModel init = InitModel<float>(spec, 1);
  std::vector<int> epochs;
  const TrainResult a = TrainModel(init, train, valid, cfg, nullptr,
                                   [&](const EpochStats &s) { epochs.push_back(s.epoch); });
  const TrainResult b = TrainModel(init, train, valid, cfg);
  CHECK(SameParameters(a.model.params, b.model.params));
  CHECK(epochs.size() == a.curve.size());
  CHECK(a.best_epoch >= 1);
  double best = a.initial_valid_loss;
  for (const EpochStats &s : a.curve) best = std::min(best, s.valid_loss);
  CHECK(Evaluate(a.model, valid).loss == doctest::Approx(best).epsilon(1e-6));
  CHECK(a.curve.back().valid_accuracy > 0.9);

  cfg.seed = 2;
  CHECK(!SameParameters(TrainModel(init, train, valid, cfg).model.params, a.model.params));

  TrainConfig bad = cfg;
  bad.learning_rate = -1;
  CHECK_THROWS_AS(bad.Validate(), UsageError);
  bad = cfg;
  bad.batch_size = 0;
  CHECK_THROWS_AS(TrainModel(init, train, valid, bad), UsageError);

  TrainConfig wild = cfg;
  wild.learning_rate = 1e30;
  CHECK_THROWS_AS(TrainModel(init, train, valid, wild), NumericError);

  FrameDataset empty;
  empty.acoustic.resize(0, 5);
  CHECK_THROWS_AS(TrainModel(init, empty, valid, cfg), DataError);

  const FeatureMatrix post = PredictFrames(a.model, valid);
  CHECK(post.rows() == 100);
  const std::vector<int> some = {3, 7};
  const FeatureMatrix two = PredictFrames(a.model, valid, some);
  CHECK((two.row(1) - post.row(7)).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("small network memorizes 100 synthetic frames") {
  const FrameDataset frames = testing::SyntheticFrames(100, 1);
  CHECK(frames.NumFrames() == 100);
  CHECK(frames.acoustic.cols() == 440);
  const double acc = testing::OverfitAccuracy(frames, 200, 1);
  MESSAGE("overfit frame accuracy ", acc);
  CHECK(acc > 0.99);
}

}  // namespace avst
