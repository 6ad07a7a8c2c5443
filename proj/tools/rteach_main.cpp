// Command-line front end: teacher training, policy evaluation, baselines and
// a built-in invariant self-test.
//
// Exit codes: 0 success, 1 config error, 2 numeric failure, 3 time-limit
// truncation.

#include <CLI11.hpp>

#include <cstdio>

#include "rteach/classifier_student.hpp"
#include "rteach/harness.hpp"
#include "rteach/tabular_student.hpp"

namespace {

using namespace rteach;

int cmd_train(const std::string& config_path) {
  const RunConfig cfg = RunConfig::parse_file(config_path);
  const auto results = run_training_over_seeds(cfg);
  bool truncated = false;
  for (const auto& r : results) {
    std::printf("seed %llu: %zu episodes, first greedy success at training episode %d%s\n",
                (unsigned long long)r.seed, r.rows.size(), r.first_success_episode,
                r.time_truncated ? " [time-truncated]" : "");
    truncated = truncated || r.time_truncated;
  }
  std::printf("checkpoints and CSV logs in %s\n", cfg.out_dir.c_str());
  return truncated ? 3 : 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& config_path) {
  const RunConfig cfg = RunConfig::parse_file(config_path);
  const std::string prefix = cfg.out_dir + "/eval_";
  const EvalResult res = evaluate_checkpoint(checkpoint, cfg, cfg.eval_students, prefix);
  std::printf("evaluated %d students: %d reached m*=%s, median steps %s\n", cfg.eval_students,
              res.n_reached(), fmt(cfg.reward.m_star).c_str(), fmt(res.median_steps()).c_str());
  return 0;
}

int cmd_baseline(const std::string& kind_name, const std::string& config_path) {
  const RunConfig cfg = RunConfig::parse_file(config_path);
  const BaselineKind kind = baseline_kind_from_name(kind_name);
  const std::string prefix = cfg.out_dir + "/baseline_" + kind_name + "_";
  const BaselineResult res = run_baseline(kind, cfg, prefix);
  if (kind == BaselineKind::ConstantStepSweep)
    std::printf("best constant step size %s with median substeps %s\n",
                fmt(res.best_alpha).c_str(), fmt(res.eval.median_substeps()).c_str());
  std::printf("%d/%d students reached the threshold; median steps %s\n", res.eval.n_reached(),
              int(res.eval.reached.size()), fmt(res.eval.median_steps()).c_str());
  return 0;
}

bool check(bool ok, const char* name, int& failures) {
  std::printf("%s %s\n", ok ? "  ok " : "  FAIL", name);
  if (!ok) ++failures;
  return ok;
}

// Quick in-process sweep of the core invariants.
int cmd_selftest() {
  int failures = 0;
  Rng rng(7);

  {  // backprop vs central finite differences on a small random net
    MlpNetwork net = MlpNetwork::make({5, 8, 4}, Activation::Relu, rng);
    Matrix x(6, 5);
    for (float& v : x.data) v = rng.normal_f();
    std::vector<int> labels(6);
    for (int& l : labels) l = rng.uniform_int(4);
    ForwardCache cache;
    mlp_forward(net, x, cache);
    Gradients grads;
    mlp_backward(net, cache, softmax_cross_entropy(cache.acts.back(), labels).dlogits, grads);
    bool ok = true;
    const float h = 1e-3f;
    for (int layer = 0; layer < 2 && ok; ++layer) {
      for (size_t j = 0; j < net.layers[layer].weight.size(); j += 7) {
        float& w = net.layers[layer].weight.data[j];
        const float saved = w;
        w = saved + h;
        const double lp = softmax_cross_entropy(mlp_forward(net, x), labels).loss;
        w = saved - h;
        const double lm = softmax_cross_entropy(mlp_forward(net, x), labels).loss;
        w = saved;
        const double fd = (lp - lm) / (2.0 * h);
        const double an = grads.layers[layer].weight.data[j];
        if (std::abs(an) > 1e-4 && std::abs(fd - an) / std::max(1e-12, std::abs(an)) > 1e-2)
          ok = false;
      }
    }
    check(ok, "gradient check (finite differences)", failures);
  }

  {  // permutation invariance of the embedder
    ParameterEmbedder pe =
        ParameterEmbedder::make(StateVariant::Pe0, 10, 1, 16, 32, 2, Pooling::Mean, rng);
    MiniState ms;
    ms.variant = StateVariant::Pe0;
    ms.record_width = 10;
    ms.count = 12;
    ms.records.resize(120);
    for (float& v : ms.records) v = rng.normal_f();
    ms.scalars = {0.5f};
    const auto a = embed(pe, ms);
    MiniState shuffled = ms;
    for (int i = 11; i > 0; --i) {
      const int j = rng.uniform_int(i + 1);
      for (int k = 0; k < 10; ++k) std::swap(shuffled.record(i)[k], shuffled.record(j)[k]);
    }
    const auto b = embed(pe, shuffled);
    bool ok = true;
    for (size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i] - b[i]) > 1e-6f) ok = false;
    check(ok, "embedding permutation invariance", failures);
  }

  {  // shaping telescopes to the potential difference
    RewardConfig rc{RewardMode::TimeToThreshold, ShapingKind::Lp, 2.0, 0.97, 50, 1e-6};
    std::vector<double> ms{0.1};
    for (int t = 0; t < 30; ++t) ms.push_back(std::min(0.999, ms.back() + rng.uniform() * 0.05));
    double acc = 0.0, g = 1.0;
    for (size_t t = 0; t + 1 < ms.size(); ++t) {
      acc += g * (compute_reward(ms[t], ms[t + 1], rc, int(t) + 1).reward + 1.0);
      g *= rc.gamma;
    }
    const double expect = g * ms.back() - ms.front();
    check(std::abs(acc - expect) < 1e-9, "learning-progress telescoping", failures);
  }

  {  // tabular q-learning fixed point on a 3-cell corridor
    GridWorld g = GridWorld::parse("kind=maze max_steps=40\n#####\n#S.G#\n#####\n");
    TabularQStudent student(g);
    student.reset(3);
    for (int i = 0; i < 200; ++i) student.run_episodes(g.target_start, 1);
    check(std::abs(student.performance() - 1.0) < 1e-9, "tabular student learns a corridor",
          failures);
  }

  {  // adam first-step magnitude
    Rng r2(5);
    MlpNetwork net = MlpNetwork::make({1, 1}, Activation::Relu, r2);
    net.layers[0].weight.at(0, 0) = 1.0f;
    OptimizerState opt = OptimizerState::adam(0.5f);
    Gradients grads;
    grads.resize_like(net);
    grads.layers[0].weight.at(0, 0) = 3.0f;
    opt.step(net, grads);
    check(std::abs(net.layers[0].weight.at(0, 0) - 0.5f) < 1e-5f, "adam bias-corrected first step",
          failures);
  }

  std::printf(failures ? "selftest: %d failure(s)\n" : "selftest: all checks passed\n", failures);
  return failures ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reinforcement-teaching experiment harness"};
  app.require_subcommand(1);

  std::string config_path, checkpoint_path, baseline_kind;

  auto* train = app.add_subcommand("train-teacher", "Train teacher policies over seeds");
  train->add_option("config", config_path, "Run config file")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a policy checkpoint on fresh students");
  eval->add_option("checkpoint", checkpoint_path, "Policy checkpoint")->required();
  eval->add_option("config", config_path, "Run config file")->required();

  auto* baseline = app.add_subcommand("baseline", "Run a baseline policy");
  baseline
      ->add_option("kind", baseline_kind,
                   "constant-step-sweep | random-teacher | scratch")
      ->required();
  baseline->add_option("config", config_path, "Run config file")->required();

  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant suite");

  try {
    app.parse(argc, argv);
    if (train->parsed()) return cmd_train(config_path);
    if (eval->parsed()) return cmd_eval(checkpoint_path, config_path);
    if (baseline->parsed()) return cmd_baseline(baseline_kind, config_path);
    if (selftest->parsed()) return cmd_selftest();
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const rteach::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const rteach::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 1;
  } catch (const rteach::NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
