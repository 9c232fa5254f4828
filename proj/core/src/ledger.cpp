#include <advocate/ledger.hpp>

#include <algorithm>
#include <sstream>

namespace advocate {

std::map<uint64_t, block_id> referring_blocks_on_chain(const block_tree& tree,
                                                       const std::vector<certificate>& certs,
                                                       const std::vector<block_id>& chain,
                                                       uint32_t window_c, bool pending_tail) {
  std::map<uint64_t, block_id> out;
  for (size_t k = 0; k < certs.size(); ++k) {
    const certificate& cert = certs[k];
    if (cert.index == 0) {
      out[0] = cert.checkpointed_block; // genesis anchors itself
      continue;
    }
    uint64_t base_depth = tree.depth(cert.checkpointed_block);
    if (base_depth >= chain.size() || chain[base_depth] != cert.checkpointed_block) {
      raise(errc::missing_referring_block,
            "checkpointed block " + cert.checkpointed_block.short_hex() + " not on chain");
    }
    bool found = false;
    for (uint64_t d = base_depth + 1; d <= base_depth + window_c && d < chain.size(); ++d) {
      const block& b = tree.get(chain[d]);
      if (b.embedded_cert && b.embedded_cert->index == cert.index &&
          b.embedded_cert->checkpointed_block == cert.checkpointed_block &&
          b.embedded_cert->signature.valid) {
        out[cert.index] = chain[d];
        found = true;
        break;
      }
    }
    if (!found) {
      // Publication can still be pending near the end of a run (the closing
      // certificate, and a final regular certificate no block followed). The
      // checkpointed block then anchors its own references.
      if (pending_tail) {
        out[cert.index] = cert.checkpointed_block;
      } else {
        raise(errc::missing_referring_block, "certificate " + std::to_string(cert.index));
      }
    }
  }
  return out;
}

std::vector<block_id> build_block_order(const block_tree& tree,
                                        const std::vector<certificate>& certs,
                                        const std::map<uint64_t, block_id>& referring,
                                        const std::vector<block_id>* live_tail_chain) {
  std::vector<block_id> order;
  std::vector<block_id> chain_prefix; // main-chain blocks emitted so far
  std::set<block_id> seen;

  auto push = [&](const block_id& id) {
    if (seen.insert(id).second) order.push_back(id);
  };

  for (const certificate& cert : certs) {
    auto it = referring.find(cert.index);
    if (it == referring.end()) {
      raise(errc::missing_referring_block, "certificate " + std::to_string(cert.index));
    }
    auto path = tree.path_from_genesis(it->second);
    if (path.size() < chain_prefix.size() ||
        (!chain_prefix.empty() && path[chain_prefix.size() - 1] != chain_prefix.back())) {
      raise(errc::missing_referring_block, "referring blocks not on a single chain");
    }
    for (size_t d = chain_prefix.size(); d < path.size(); ++d) {
      chain_prefix.push_back(path[d]);
      push(path[d]);
    }
    for (const auto& ref : cert.references) push(ref);
  }

  if (live_tail_chain) {
    for (size_t d = chain_prefix.size(); d < live_tail_chain->size(); ++d) {
      push((*live_tail_chain)[d]);
    }
  }
  return order;
}

void sanitize_extend(aggregate_ledger& ledger, const std::vector<block_id>& block_order,
                     const std::function<const block&(const block_id&)>& lookup) {
  for (size_t i = ledger.block_order.size(); i < block_order.size(); ++i) {
    const block_id& bid = block_order[i];
    ledger.block_order.push_back(bid);
    ledger.block_position.emplace(bid, i);
    const block& b = lookup(bid);
    for (const transaction& tx : b.txs) {
      if (ledger.position.count(tx.id)) continue; // duplicate of an included tx
      bool ok = true;
      for (const tx_id& in : tx.inputs) {
        if (!ledger.position.count(in) || ledger.spent.count(in)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      for (const tx_id& in : tx.inputs) ledger.spent.insert(in);
      ledger.position.emplace(tx.id, ledger.tx_order.size());
      ledger.tx_block.emplace(tx.id, bid);
      ledger.tx_order.push_back(tx.id);
    }
  }
}

void sanitize_extend(aggregate_ledger& ledger, const std::vector<block_id>& block_order,
                     const block_tree& tree) {
  sanitize_extend(ledger, block_order,
                  [&tree](const block_id& id) -> const block& { return tree.get(id); });
}

aggregate_ledger sanitize(const std::vector<block_id>& block_order, const block_tree& tree) {
  aggregate_ledger ledger;
  sanitize_extend(ledger, block_order, tree);
  return ledger;
}

size_t stable_prefix(const aggregate_ledger& ledger, const std::vector<certificate>& certs) {
  if (certs.empty()) return 0;
  const block_id& latest = certs.back().checkpointed_block;
  auto it = ledger.block_position.find(latest);
  if (it == ledger.block_position.end()) return 0;
  return it->second + 1;
}

std::string dump_ledger(const aggregate_ledger& ledger, const block_tree& tree) {
  std::ostringstream os;
  for (size_t i = 0; i < ledger.tx_order.size(); ++i) {
    const tx_id& id = ledger.tx_order[i];
    const block_id& bid = ledger.tx_block.at(id);
    const block& b = tree.get(bid);
    const transaction* tx = nullptr;
    for (const auto& t : b.txs) {
      if (t.id == id) {
        tx = &t;
        break;
      }
    }
    os << i << " " << id.hex() << " " << bid.hex() << " "
       << (tx ? miner_class_name(tx->origin) : "unknown") << "\n";
  }
  return os.str();
}

} // namespace advocate
