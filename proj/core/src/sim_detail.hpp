#pragma once

#include <map>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "pcdiff/fruitchains.hpp"
#include "pcdiff/ohie.hpp"
#include "pcdiff/prism.hpp"
#include "pcdiff/sim.hpp"

namespace pcdiff::sim::detail {

inline constexpr std::uint32_t kAdversaryClass = 1000;
inline constexpr std::uint32_t kFruitClass = 2000;
inline constexpr std::uint32_t kNobody = 0xffffffffu;

enum class Seen : std::uint8_t { Unknown, Waiting, Accepted, Rejected };

struct Node {
  explicit Node(const BlockStore& store) : view(store) {}
  ChainView view;
  std::vector<Seen> seen;
  // missing dependency -> blocks waiting for it
  std::unordered_map<BlockRef, std::vector<BlockRef>> waiting;
  fruit::FruitPool pool;
};

class Simulation;

class Adversary {
 public:
  virtual ~Adversary() = default;
  // Start of a round, after deliveries.
  virtual void observe(Simulation&) {}
  // After the honest blocks of the round reached the adversary.
  virtual void act(Simulation&) = 0;
  // True while an attack is running and unresolved.
  virtual bool attack_open() const { return false; }
};

std::unique_ptr<Adversary> make_adversary(const SimConfig& config);

class Simulation {
 public:
  Simulation(const SimConfig& config, const RunHooks& hooks);
  ~Simulation();

  EventLog run();

  const SimConfig& config() const { return config_; }
  const BlockStore& store() const { return log_.store(); }
  const ProtocolParams& params() const { return config_.params; }
  Round now() const { return now_; }
  std::uint32_t honest_count() const { return config_.honest_nodes; }
  std::uint32_t adversary_index() const { return config_.honest_nodes; }
  Miner adversary_miner() const { return Miner{adversary_index(), true}; }
  Node& node(std::uint32_t i) { return nodes_[i]; }
  Node& adversary_node() { return nodes_.at(adversary_index()); }
  const ChainView& reference_view() const { return nodes_[0].view; }

  // Blocks the adversary finds this round on chain c when mining at `target`.
  std::uint32_t adversary_draw(ChainId c, const Rational& target, std::uint32_t stream = 0);

  BlockRef create(const BlockDraft& d, std::span<const BlockRef> payload = {}, const ohie::OhieMeta* meta = nullptr);
  // Target a block extending the view's tips on chain c would carry.
  Rational template_target(const ChainView& view, ChainId c) const;
  // Honest-rule block on chain c built from the node's view (not yet received anywhere).
  BlockRef mine_template(Node& node, ChainId c, Miner miner);
  BlockRef mine_fruit(Node& node, Miner miner);

  // Adversary-side publication: into its own view now, to honest nodes after the release delay.
  void publish(BlockRef b);
  void withhold(BlockRef b);
  void release(BlockRef b);
  void resolve_attack(AttackResult result, BlockRef target);

  void receive(std::uint32_t node_index, BlockRef b);

 private:
  struct Delivery {
    BlockRef block;
    std::uint32_t skip;  // node that already has it
  };

  void schedule(BlockRef b, Round at, std::uint32_t skip);
  void deliver_due();
  void honest_round(double multiplier);
  void sample(double multiplier);
  void record_round(double multiplier);
  void snapshot();
  void dependencies(BlockRef b, std::vector<BlockRef>& out) const;
  Verdict validate(const ChainView& view, BlockRef b) const;
  void log_event(EventKind kind, BlockRef b, std::uint32_t node, std::uint8_t code = 0);

  const SimConfig& config_;
  const RunHooks& hooks_;
  EventLog log_;
  std::vector<Node> nodes_;
  std::unique_ptr<Adversary> adversary_;
  std::vector<double> multipliers_;
  std::vector<double> shares_;  // honest hash share per node
  double f_ = 0;
  double t0_ = 1;
  Round now_ = 0;
  std::uint32_t honest_delay_ = 1;
  std::uint32_t release_delay_ = 1;
  std::vector<std::vector<Delivery>> ring_;
  std::multimap<Round, Delivery> later_;
  std::vector<std::pair<BlockRef, std::uint32_t>> fresh_;
  std::vector<BlockRef> work_;
  std::vector<BlockRef> deps_;
  std::vector<BlockRef> payload_;
  GoodRounds good_;
  bool stopped_ = false;
};

}  // namespace pcdiff::sim::detail
