#pragma once

#include <advocate/baselines.hpp>
#include <advocate/bft.hpp>
#include <advocate/ledger.hpp>
#include <advocate/parallel.hpp>

#include <string>
#include <variant>
#include <vector>

namespace advocate {

enum class protocol_variant : uint8_t {
  advocate,
  advocate_hooks,
  advocate_bft,
  advocate_pc,
  nakamoto_cp,
  stochastic_cp,
};

enum class adversary_strategy : uint8_t {
  none,
  private_mining_bursts,
  censorship,
};

const char* variant_name(protocol_variant v) noexcept;
const char* strategy_name(adversary_strategy s) noexcept;
protocol_variant parse_variant(const std::string& s);
adversary_strategy parse_strategy(const std::string& s);

// One cell of an experiment. Same (config, seed) reproduces a byte-identical
// run.
struct sim_config {
  double beta = 0.0;        // adversarial mining fraction
  double honest_rate = 0.5; // h: probability at least one honest block per round
  uint32_t epoch_e = 5;
  uint32_t window_c = 2;
  std::optional<uint32_t> hook_t;
  uint32_t delta = 1;     // network delay bound, rounds
  uint32_t delta_bft = 0; // BFT finalization delay, rounds
  uint32_t rounds = 1000;
  uint64_t seed = 1;
  protocol_variant variant = protocol_variant::advocate;
  adversary_strategy adversary = adversary_strategy::none;
  uint32_t tx_rate = 2; // honest transactions generated per round
  uint32_t parties = 4; // honest node count
  uint32_t chains = 1;  // M, parallel-chain variant only
  uint32_t service_delay = 0;
  uint32_t bft_n = 4;
  uint32_t bft_f = 1;

  void validate() const; // ConfigError
  std::string describe() const;
};

// Event records, one variant alternative per kind. The NDJSON dump follows
// field order here; metrics read them straight from the vector.
struct ev_block_mined {
  block_id id;
  block_id parent;
  miner_class miner;
  uint32_t chain = 0;
  uint64_t depth = 0;
  uint32_t tx_count = 0;
  bool embeds_cert = false;
  uint64_t ledger_len_at_creation = 0; // creator's live aggregate ledger length
  bool released = true;                // false while withheld on a private fork
};

struct ev_block_received {
  block_id id;
  uint32_t party; // party index; parties..=observer/service
};

struct ev_cert_emitted {
  uint64_t index;
  block_id checkpointed;
  uint64_t ref_count;
  bool closing = false;
};

struct ev_cert_adopted {
  uint64_t index;
  uint32_t party;
};

struct ev_tx_generated {
  tx_id id;
};

struct ev_tx_confirmed {
  tx_id id;
  uint64_t generated_round;
  uint64_t position; // tx_order position in the measuring party's ledger
};

struct ev_tx_mined {
  tx_id id;
  block_id in_block;
};

struct ev_stable_advanced {
  uint32_t party;
  uint64_t block_prefix_len;
};

struct ev_burst_released {
  uint64_t count;
  uint64_t fork_depth;
};

struct ev_smr_posted {
  uint64_t entry;
  block_id block;
  uint64_t depth;
  bool checkpoint_kind;
  uint64_t finalized_round;
};

struct ev_run_closed {
  uint64_t final_cert_index;
};

struct sim_event {
  uint64_t round = 0;
  std::variant<ev_block_mined, ev_block_received, ev_cert_emitted, ev_cert_adopted,
               ev_tx_generated, ev_tx_confirmed, ev_tx_mined, ev_stable_advanced,
               ev_burst_released, ev_smr_posted, ev_run_closed>
      data;
};

struct event_log {
  std::vector<sim_event> events;

  void push(uint64_t round, auto&& ev) {
    events.push_back(sim_event{round, std::forward<decltype(ev)>(ev)});
  }

  std::string to_ndjson() const; // one object per line, deterministic
};

struct sim_result {
  sim_config config;
  event_log log;

  // Final state from the observer's view after the closing checkpoint.
  std::vector<block_tree> trees; // single entry unless parallel-chain
  aggregate_ledger final_ledger;
  std::vector<certificate> certs;        // certificate-variant families
  std::vector<baseline_cert> baseline_certs;
  std::vector<pc_certificate> pc_certs;
  std::string smr_dump; // BFT runs only

  bool safety_ok = true;
  bool synchrony_ok = true; // N_uni delivery bound held (BFT bookkeeping)

  uint64_t honest_blocks_mined = 0;
  uint64_t adversarial_blocks_mined = 0;
  uint64_t effective_rounds = 0; // including the close-out flush
};

// Executes the full round loop: mining lottery, rushing adversary, diffuse
// delivery within delta, checkpoint machinery, per-round safety assertions,
// then a close-out flush ending on a final checkpoint.
//
// errors: ConfigError up front; SafetyViolation if any honest party's stable
// prefix ever conflicts (would signal a bug or a broken model assumption).
sim_result run_simulation(const sim_config& config);

} // namespace advocate
