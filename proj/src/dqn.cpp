#include "rteach/dqn.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace rteach {

DqnTeacher::DqnTeacher(const TeacherConfig& cfg, int record_width, int n_scalars, int n_actions,
                       Rng& rng)
    : cfg_(cfg), record_width_(record_width), n_scalars_(n_scalars), n_actions_(n_actions) {
  if (n_actions < 1) throw ConfigError("teacher: empty action space");
  embedder_ = ParameterEmbedder::make(cfg.variant, record_width, n_scalars, cfg.embed_dim,
                                      cfg.encoder_hidden, cfg.encoder_layers, cfg.pooling, rng);
  qhead_ = MlpNetwork::make({embedder_.state_width(), cfg.qhead_hidden, n_actions},
                            Activation::Relu, rng);
  opt_embed_ = OptimizerState::adam(cfg.lr);
  opt_head_ = OptimizerState::adam(cfg.lr);
  sync_target();
}

void DqnTeacher::sync_target() {
  target_embedder_ = embedder_;
  target_qhead_ = qhead_;
}

double DqnTeacher::epsilon_for_episode(int episode) const {
  const double eps = cfg_.eps_start * std::pow(cfg_.eps_decay, double(episode));
  return std::max(eps, cfg_.eps_floor);
}

void DqnTeacher::forward_q(const ParameterEmbedder& pe, const MlpNetwork& head,
                           std::span<const MiniState* const> batch, EmbedCache& ecache,
                           ForwardCache& qcache, Matrix& q_out) {
  const Matrix& state = embed_batch(pe, batch, ecache);
  const Matrix& q = mlp_forward(head, state, qcache);
  q_out.resize(q.rows, q.cols);
  q_out.data = q.data;
}

std::vector<float> DqnTeacher::q_values(const MiniState& ms) {
  const MiniState* ptr = &ms;
  forward_q(embedder_, qhead_, std::span<const MiniState* const>(&ptr, 1), ecache_tmp_,
            qcache_tmp_, q_s_);
  return std::vector<float>(q_s_.data.begin(), q_s_.data.end());
}

int DqnTeacher::select_action(const MiniState& ms, double eps, Rng& rng) {
  if (eps > 0.0 && rng.uniform() < eps) return rng.uniform_int(n_actions_);
  const std::vector<float> q = q_values(ms);
  int best = 0;
  for (int a = 1; a < n_actions_; ++a)
    if (q[size_t(a)] > q[size_t(best)]) best = a;
  return best;
}

double DqnTeacher::dqn_target(const TeacherTransition& tr) {
  if (tr.terminal) return tr.reward;
  const MiniState* ptr = tr.next_state.get();
  const std::span<const MiniState* const> one(&ptr, 1);
  forward_q(target_embedder_, target_qhead_, one, ecache_tmp_, qcache_tmp_, q_next_target_);
  int a = 0;
  if (cfg_.double_dqn) {
    forward_q(embedder_, qhead_, one, ecache_tmp_, qcache_tmp_, q_next_online_);
    a = argmax_row(q_next_online_, 0);
  } else {
    a = argmax_row(q_next_target_, 0);
  }
  return tr.reward + cfg_.gamma * double(q_next_target_.at(0, a));
}

double DqnTeacher::train_step(const ReplayBuffer& replay, Rng& rng) {
  const int b = cfg_.batch;
  replay.sample(b, rng, sample_);

  ms_batch_.resize(size_t(b));
  for (int i = 0; i < b; ++i) ms_batch_[size_t(i)] = sample_[size_t(i)]->state.get();
  forward_q(embedder_, qhead_, ms_batch_, ecache_s_, qcache_s_, q_s_);

  for (int i = 0; i < b; ++i) ms_batch_[size_t(i)] = sample_[size_t(i)]->next_state.get();
  forward_q(target_embedder_, target_qhead_, ms_batch_, ecache_tmp_, qcache_tmp_,
            q_next_target_);
  if (cfg_.double_dqn)
    forward_q(embedder_, qhead_, ms_batch_, ecache_tmp_, qcache_tmp_, q_next_online_);

  dq_.resize(b, n_actions_);
  dq_.fill(0.0f);
  double loss = 0.0;
  const float inv_b = 1.0f / float(b);
  for (int i = 0; i < b; ++i) {
    const TeacherTransition& tr = *sample_[size_t(i)];
    double y = tr.reward;
    if (!tr.terminal) {
      const int a = cfg_.double_dqn ? argmax_row(q_next_online_, i) : argmax_row(q_next_target_, i);
      y += cfg_.gamma * double(q_next_target_.at(i, a));
    }
    const double diff = double(q_s_.at(i, tr.action)) - y;
    loss += diff * diff;
    dq_.at(i, tr.action) = float(2.0 * diff) * inv_b;
  }
  loss /= double(b);

  mlp_backward(qhead_, qcache_s_, dq_, grads_head_, true, &scratch_);
  if (!embedder_.bypass()) {
    dstate_.resize(grads_head_.dinput.rows, grads_head_.dinput.cols);
    dstate_.data = grads_head_.dinput.data;
    embed_backward(embedder_, ecache_s_, dstate_, grads_embed_, drecords_, scratch_);
    opt_embed_.step(embedder_.joint, grads_embed_);
  }
  opt_head_.step(qhead_, grads_head_);

  ++train_calls_;
  if (train_calls_ % cfg_.sync_period == 0) sync_target();
  return loss;
}

namespace {

void write_floats(std::ofstream& f, const MlpNetwork& net) {
  std::vector<float> flat;
  net.flatten_to(flat);
  const uint64_t n = flat.size();
  f.write(reinterpret_cast<const char*>(&n), sizeof n);
  f.write(reinterpret_cast<const char*>(flat.data()), std::streamsize(n * sizeof(float)));
}

void read_floats(std::ifstream& f, MlpNetwork& net) {
  uint64_t n = 0;
  if (!f.read(reinterpret_cast<char*>(&n), sizeof n)) throw IoError("checkpoint: truncated");
  std::vector<float> flat(n);
  if (!f.read(reinterpret_cast<char*>(flat.data()), std::streamsize(n * sizeof(float))))
    throw IoError("checkpoint: truncated payload");
  net.unflatten_from(flat);
}

}  // namespace

void DqnTeacher::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("checkpoint: cannot write " + path);
  f << "rteach-checkpoint v1\n";
  f << "variant=" << variant_name(cfg_.variant) << "\n";
  f << "mini_state_m=" << cfg_.mini_state_m << "\n";
  f << "pooling=" << pooling_name(cfg_.pooling) << "\n";
  f << "record_width=" << record_width_ << "\n";
  f << "n_scalars=" << n_scalars_ << "\n";
  f << "n_actions=" << n_actions_ << "\n";
  f << "embed_dim=" << cfg_.embed_dim << "\n";
  f << "encoder_hidden=" << cfg_.encoder_hidden << "\n";
  f << "encoder_layers=" << cfg_.encoder_layers << "\n";
  f << "qhead_hidden=" << cfg_.qhead_hidden << "\n";
  f << "double_dqn=" << (cfg_.double_dqn ? 1 : 0) << "\n";
  f << "gamma=" << cfg_.gamma << "\n";
  f << "payload\n";
  if (!embedder_.bypass()) write_floats(f, embedder_.joint);
  write_floats(f, qhead_);
  if (!f) throw IoError("checkpoint: write failed for " + path);
}

DqnTeacher DqnTeacher::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("checkpoint: cannot open " + path);
  std::string line;
  if (!std::getline(f, line) || line != "rteach-checkpoint v1")
    throw IoError("checkpoint: bad header in " + path);

  std::map<std::string, std::string> kv;
  while (std::getline(f, line)) {
    if (line == "payload") break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("checkpoint: bad header line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw IoError("checkpoint: missing key " + key);
    return it->second;
  };

  TeacherConfig cfg;
  cfg.variant = variant_from_name(get("variant"));
  cfg.mini_state_m = std::stoi(get("mini_state_m"));
  cfg.pooling = pooling_from_name(get("pooling"));
  cfg.embed_dim = std::stoi(get("embed_dim"));
  cfg.encoder_hidden = std::stoi(get("encoder_hidden"));
  cfg.encoder_layers = std::stoi(get("encoder_layers"));
  cfg.qhead_hidden = std::stoi(get("qhead_hidden"));
  cfg.double_dqn = get("double_dqn") == "1";
  cfg.gamma = std::stod(get("gamma"));

  Rng rng(0);
  DqnTeacher t(cfg, std::stoi(get("record_width")), std::stoi(get("n_scalars")),
               std::stoi(get("n_actions")), rng);
  if (!t.embedder_.bypass()) read_floats(f, t.embedder_.joint);
  read_floats(f, t.qhead_);
  t.sync_target();
  return t;
}

}  // namespace rteach
