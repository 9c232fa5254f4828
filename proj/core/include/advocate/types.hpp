#pragma once

#include <advocate/hash.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace advocate {

enum class miner_class : uint8_t { honest = 0, adversarial = 1 };

const char* miner_class_name(miner_class m) noexcept;

// Signatures are ideal in the security analysis, so a record with an issuer id
// and a validity bit is all that is needed. Tests flip `valid` to exercise the
// rejection paths.
struct mock_signature {
  uint32_t issuer = 0;
  bool valid = true;

  auto operator<=>(const mock_signature&) const = default;
};

// Toy transfer model: a transaction consumes previously-created transactions
// (by id) and creates `outputs` new spendable outputs. Empty `inputs` is a
// coinbase-style mint and is always valid.
struct transaction {
  tx_id id;
  std::vector<tx_id> inputs;
  uint32_t outputs = 1;
  uint64_t created_round = 0;
  miner_class origin = miner_class::honest;
  uint64_t nonce = 0;

  // id over the canonical serialization of the remaining fields.
  static transaction make(std::vector<tx_id> inputs, uint32_t outputs, uint64_t created_round,
                          miner_class origin, uint64_t nonce);

  bool operator==(const transaction& o) const { return id == o.id; }
};

struct smr_witness {
  uint64_t smr_position = 0;
  uint32_t quorum_bitmap = 0; // bit i set => committee node i signed

  auto operator<=>(const smr_witness&) const = default;
};

// Checkpoint certificate C_i = {B_i, R_i, S_i}. The federated variant also
// carries the Merkle root of R_i and a finality witness.
struct certificate {
  uint64_t index = 0;
  block_id checkpointed_block;
  std::vector<block_id> references; // universal topological order
  mock_signature signature;
  std::optional<block_id> merkle_root;
  std::optional<smr_witness> witness;
  uint64_t issued_round = 0;
};

// Baseline checkpoint: a single block hash, no reference list. The nonce only
// matters for the stochastic variant, where it forces a renewal race.
struct baseline_cert {
  uint64_t index = 0;
  block_id checkpointed_block;
  uint64_t nonce = 0;
  mock_signature signature;
  uint64_t issued_round = 0;
};

struct block {
  block_id id;
  block_id parent;
  miner_class miner = miner_class::honest;
  std::vector<transaction> txs;
  uint64_t round_mined = 0;
  std::optional<certificate> embedded_cert;
  std::optional<baseline_cert> embedded_checkpoint;
  std::optional<uint64_t> hook; // latest certificate index known at mining time
  uint32_t chain_id = 0;        // 0 in single-chain mode

  // Parallel-chain mode: acknowledgement of a certificate-bearing base-chain
  // block, required of non-base chains before the rank deadline.
  std::optional<block_id> base_ref;

  bool is_genesis() const { return parent.is_zero(); }

  // Computes the content id over the canonical serialization and returns the
  // completed block.
  static block make(block_id parent, miner_class miner, std::vector<transaction> txs,
                    uint64_t round_mined, std::optional<certificate> cert = std::nullopt,
                    std::optional<baseline_cert> checkpoint = std::nullopt,
                    std::optional<uint64_t> hook = std::nullopt, uint32_t chain_id = 0,
                    std::optional<block_id> base_ref = std::nullopt);
};

// Genesis is fixed per chain: its id is derived from a constant seed string so
// every run and every platform agrees on it.
block make_genesis(uint32_t chain_id = 0);

// Canonical length-prefixed binary layouts (documented in serialize.cpp next
// to the implementations). These are what the content ids hash.
std::vector<uint8_t> serialize_binary(const transaction& tx);
std::vector<uint8_t> serialize_binary(const certificate& cert);
std::vector<uint8_t> serialize_binary(const baseline_cert& cert);
std::vector<uint8_t> serialize_binary(const block& b);

// Human-readable structured text, used by the golden-file tests and dumps.
std::string to_text(const transaction& tx);
std::string to_text(const certificate& cert);
std::string to_text(const block& b);

} // namespace advocate
