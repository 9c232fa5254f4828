#include <advocate/types.hpp>

#include <sstream>

namespace advocate {

const char* miner_class_name(miner_class m) noexcept {
  return m == miner_class::honest ? "honest" : "adversarial";
}

// Binary layout (all integers little-endian, all lists u32-count-prefixed):
//
//   transaction:   'T' | u32 n_inputs | n_inputs * 32B | u32 outputs
//                  | u64 created_round | u8 origin | u64 nonce
//   certificate:   'C' | u64 index | 32B checkpointed | u32 n_refs | n_refs * 32B
//                  | u32 issuer | u8 valid | u8 has_merkle [| 32B root]
//                  | u8 has_witness [| u64 position | u32 bitmap] | u64 issued_round
//   baseline cert: 'c' | u64 index | 32B checkpointed | u64 nonce
//                  | u32 issuer | u8 valid | u64 issued_round
//   block:         'B' | 32B parent | u8 miner | u32 chain_id | u64 round
//                  | u8 has_cert [| certificate] | u8 has_checkpoint [| baseline]
//                  | u8 has_hook [| u64 hook] | u8 has_base_ref [| 32B]
//                  | u32 n_txs | n_txs * 32B tx ids
//
// A block commits to its transactions by id; transaction bodies travel next to
// the block but do not re-enter the block hash.

namespace {

void write_tx(byte_writer& w, const transaction& tx) {
  w.u8('T');
  w.u32(static_cast<uint32_t>(tx.inputs.size()));
  for (const auto& in : tx.inputs) w.digest(in);
  w.u32(tx.outputs);
  w.u64(tx.created_round);
  w.u8(static_cast<uint8_t>(tx.origin));
  w.u64(tx.nonce);
}

void write_cert(byte_writer& w, const certificate& cert) {
  w.u8('C');
  w.u64(cert.index);
  w.digest(cert.checkpointed_block);
  w.u32(static_cast<uint32_t>(cert.references.size()));
  for (const auto& r : cert.references) w.digest(r);
  w.u32(cert.signature.issuer);
  w.u8(cert.signature.valid ? 1 : 0);
  w.u8(cert.merkle_root ? 1 : 0);
  if (cert.merkle_root) w.digest(*cert.merkle_root);
  w.u8(cert.witness ? 1 : 0);
  if (cert.witness) {
    w.u64(cert.witness->smr_position);
    w.u32(cert.witness->quorum_bitmap);
  }
  w.u64(cert.issued_round);
}

void write_baseline(byte_writer& w, const baseline_cert& cert) {
  w.u8('c');
  w.u64(cert.index);
  w.digest(cert.checkpointed_block);
  w.u64(cert.nonce);
  w.u32(cert.signature.issuer);
  w.u8(cert.signature.valid ? 1 : 0);
  w.u64(cert.issued_round);
}

void write_block(byte_writer& w, const block& b) {
  w.u8('B');
  w.digest(b.parent);
  w.u8(static_cast<uint8_t>(b.miner));
  w.u32(b.chain_id);
  w.u64(b.round_mined);
  w.u8(b.embedded_cert ? 1 : 0);
  if (b.embedded_cert) write_cert(w, *b.embedded_cert);
  w.u8(b.embedded_checkpoint ? 1 : 0);
  if (b.embedded_checkpoint) write_baseline(w, *b.embedded_checkpoint);
  w.u8(b.hook ? 1 : 0);
  if (b.hook) w.u64(*b.hook);
  w.u8(b.base_ref ? 1 : 0);
  if (b.base_ref) w.digest(*b.base_ref);
  w.u32(static_cast<uint32_t>(b.txs.size()));
  for (const auto& tx : b.txs) w.digest(tx.id);
}

} // namespace

std::vector<uint8_t> serialize_binary(const transaction& tx) {
  byte_writer w;
  write_tx(w, tx);
  return w.data();
}

std::vector<uint8_t> serialize_binary(const certificate& cert) {
  byte_writer w;
  write_cert(w, cert);
  return w.data();
}

std::vector<uint8_t> serialize_binary(const baseline_cert& cert) {
  byte_writer w;
  write_baseline(w, cert);
  return w.data();
}

std::vector<uint8_t> serialize_binary(const block& b) {
  byte_writer w;
  write_block(w, b);
  return w.data();
}

transaction transaction::make(std::vector<tx_id> inputs, uint32_t outputs, uint64_t created_round,
                              miner_class origin, uint64_t nonce) {
  transaction tx;
  tx.inputs = std::move(inputs);
  tx.outputs = outputs;
  tx.created_round = created_round;
  tx.origin = origin;
  tx.nonce = nonce;
  tx.id.bytes = sha256(serialize_binary(tx));
  return tx;
}

block block::make(block_id parent, miner_class miner, std::vector<transaction> txs,
                  uint64_t round_mined, std::optional<certificate> cert,
                  std::optional<baseline_cert> checkpoint, std::optional<uint64_t> hook,
                  uint32_t chain_id, std::optional<block_id> base_ref) {
  block b;
  b.parent = parent;
  b.miner = miner;
  b.txs = std::move(txs);
  b.round_mined = round_mined;
  b.embedded_cert = std::move(cert);
  b.embedded_checkpoint = std::move(checkpoint);
  b.hook = hook;
  b.chain_id = chain_id;
  b.base_ref = base_ref;
  b.id.bytes = sha256(serialize_binary(b));
  return b;
}

block make_genesis(uint32_t chain_id) {
  block g;
  g.parent = block_id{};
  g.miner = miner_class::honest;
  g.round_mined = 0;
  g.chain_id = chain_id;
  std::string seed = "advocate-genesis/" + std::to_string(chain_id);
  g.id.bytes = sha256(seed);
  return g;
}

std::string to_text(const transaction& tx) {
  std::ostringstream os;
  os << "tx " << tx.id.hex() << "\n";
  os << "  inputs:";
  if (tx.inputs.empty()) {
    os << " (mint)";
  } else {
    for (const auto& in : tx.inputs) os << " " << in.short_hex();
  }
  os << "\n";
  os << "  outputs: " << tx.outputs << "\n";
  os << "  created_round: " << tx.created_round << "\n";
  os << "  origin: " << miner_class_name(tx.origin) << "\n";
  return os.str();
}

std::string to_text(const certificate& cert) {
  std::ostringstream os;
  os << "certificate " << cert.index << "\n";
  os << "  checkpointed: " << cert.checkpointed_block.hex() << "\n";
  os << "  references (" << cert.references.size() << "):";
  for (const auto& r : cert.references) os << " " << r.short_hex();
  os << "\n";
  os << "  signature: issuer=" << cert.signature.issuer
     << " valid=" << (cert.signature.valid ? "yes" : "no") << "\n";
  if (cert.merkle_root) os << "  merkle_root: " << cert.merkle_root->hex() << "\n";
  if (cert.witness) {
    os << "  witness: position=" << cert.witness->smr_position << " quorum=0x" << std::hex
       << cert.witness->quorum_bitmap << std::dec << "\n";
  }
  os << "  issued_round: " << cert.issued_round << "\n";
  return os.str();
}

std::string to_text(const block& b) {
  std::ostringstream os;
  os << "block " << b.id.hex() << "\n";
  os << "  parent: " << (b.is_genesis() ? std::string("(none)") : b.parent.hex()) << "\n";
  os << "  miner: " << miner_class_name(b.miner) << "\n";
  os << "  chain: " << b.chain_id << "\n";
  os << "  round_mined: " << b.round_mined << "\n";
  if (b.hook) os << "  hook: " << *b.hook << "\n";
  if (b.embedded_cert) os << "  embeds certificate " << b.embedded_cert->index << "\n";
  if (b.embedded_checkpoint) os << "  embeds checkpoint " << b.embedded_checkpoint->index << "\n";
  os << "  txs (" << b.txs.size() << "):";
  for (const auto& tx : b.txs) os << " " << tx.id.short_hex();
  os << "\n";
  return os.str();
}

} // namespace advocate
