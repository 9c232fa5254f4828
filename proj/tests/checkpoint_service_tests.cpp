#include <doctest.h>

#include <advocate/checkpoint_service.hpp>

using namespace advocate;

namespace {

block tagged(const block_id& parent, uint64_t round, uint64_t salt,
             std::optional<certificate> cert = std::nullopt,
             std::optional<uint64_t> hook = std::nullopt) {
  transaction tag = transaction::make({}, 1, round, miner_class::honest, salt);
  return block::make(parent, miner_class::honest, {tag}, round, std::move(cert), std::nullopt,
                     hook);
}

struct fixture {
  block_tree tree;
  block genesis = make_genesis();
  uint64_t salt = 0;

  fixture() { tree.insert_block(genesis); }

  std::vector<block_id> extend(const block_id& from, size_t n, uint64_t first_round,
                               std::optional<certificate> cert_in_first = std::nullopt,
                               std::optional<uint64_t> hook = std::nullopt) {
    std::vector<block_id> ids;
    block_id parent = from;
    for (size_t i = 0; i < n; ++i) {
      block b = tagged(parent, first_round + i, ++salt,
                       i == 0 ? cert_in_first : std::nullopt, hook);
      tree.insert_block(b);
      parent = b.id;
      ids.push_back(b.id);
    }
    return ids;
  }
};

} // namespace

TEST_CASE("bootstrap certificate") {
  certificate c0 = bootstrap_certificate();
  CHECK(c0.index == 0);
  CHECK(c0.checkpointed_block == make_genesis().id);
  CHECK(c0.references == std::vector<block_id>{make_genesis().id});
  CHECK(c0.signature.valid);
}

TEST_CASE("epoch trigger every e main-chain blocks") {
  fixture f;
  service_state svc = make_service_state(5, 2);

  SUBCASE("block at trigger depth emits") {
    auto chain = f.extend(f.genesis.id, 5, 1);
    auto cert = on_new_block(svc, f.tree, f.tree.get(chain.back()), 5);
    REQUIRE(cert.has_value());
    CHECK(cert->index == 1);
    CHECK(cert->checkpointed_block == chain.back());
  }

  SUBCASE("block short of the trigger does not") {
    auto chain = f.extend(f.genesis.id, 3, 1);
    CHECK_FALSE(on_new_block(svc, f.tree, f.tree.get(chain.back()), 3).has_value());
  }

  SUBCASE("stale blocks raise") {
    auto chain = f.extend(f.genesis.id, 5, 1);
    REQUIRE(on_new_block(svc, f.tree, f.tree.get(chain.back()), 5).has_value());
    try {
      (void)on_new_block(svc, f.tree, f.tree.get(chain[1]), 6);
      CHECK(false);
    } catch (const protocol_error& e) {
      CHECK(e.code() == errc::stale_block);
    }
  }

  SUBCASE("scan finds the trigger on the current chain") {
    f.extend(f.genesis.id, 7, 1);
    auto cert = service_scan(svc, f.tree, 7);
    REQUIRE(cert.has_value());
    CHECK(f.tree.depth(cert->checkpointed_block) == 5);
  }
}

TEST_CASE("references cover exactly the uncheckpointed off-chain blocks") {
  fixture f;
  service_state svc = make_service_state(5, 2);

  auto chain = f.extend(f.genesis.id, 5, 1);
  auto uncle_branch = f.extend(chain[1], 2, 3); // two uncles off the main chain
  auto next_epoch = f.extend(chain.back(), 1, 6); // descendant of the candidate

  auto cert = service_scan(svc, f.tree, 6);
  REQUIRE(cert.has_value());

  std::set<block_id> refs(cert->references.begin(), cert->references.end());
  CHECK(refs == std::set<block_id>{uncle_branch[0], uncle_branch[1]});
  CHECK(cert->references == canonical_block_order(refs, f.tree));
  // descendants of the candidate wait for the next epoch
  CHECK_FALSE(refs.count(next_epoch[0]));

  SUBCASE("no block is referenced twice") {
    // publish C_1 inside the window, then complete the next epoch
    f.extend(next_epoch[0], 4, 7, *cert);
    auto cert2 = service_scan(svc, f.tree, 12);
    REQUIRE(cert2.has_value());
    std::set<block_id> refs2(cert2->references.begin(), cert2->references.end());
    for (const auto& id : refs) CHECK_FALSE(refs2.count(id));
    CHECK(refs2.count(next_epoch[0]) == 0); // on the main chain now
  }
}

TEST_CASE("reference completeness across an execution") {
  // At each certificate: every tree block is on the checkpointed prefix,
  // referenced by some certificate, or a descendant of the candidate.
  fixture f;
  service_state svc = make_service_state(3, 2);
  block_id tip = f.genesis.id;
  std::optional<certificate> pending_publish;
  for (int epoch = 0; epoch < 4; ++epoch) {
    auto chain = f.extend(tip, 3, 1 + epoch * 4, pending_publish);
    f.extend(tip, 1, 2 + epoch * 4); // one uncle per epoch
    tip = chain.back();
    auto cert = service_scan(svc, f.tree, 4 + epoch * 4);
    REQUIRE(cert.has_value());
    pending_publish = cert; // next epoch's first block publishes it

    std::set<block_id> covered = svc.referenced_blocks;
    std::set<block_id> below;
    std::vector<block_id> stack{cert->checkpointed_block};
    while (!stack.empty()) {
      block_id cur = stack.back();
      stack.pop_back();
      for (const auto& k : f.tree.children(cur)) {
        below.insert(k);
        stack.push_back(k);
      }
    }
    for (const auto& id : f.tree.all_ids()) {
      CHECK((covered.count(id) || below.count(id)));
    }
  }
}

TEST_CASE("hook expiry excludes stale uncles") {
  // An uncle hooked to certificate 0 that surfaces only after C_1 was issued
  // cannot be referenced by C_2 when t = 1.
  fixture f;
  service_state svc = make_service_state(5, 2, 1u);

  auto chain1 = f.extend(f.genesis.id, 5, 1, std::nullopt, 0u);
  auto c1 = service_scan(svc, f.tree, 5);
  REQUIRE(c1.has_value());

  // late uncle, mined under C_0 (hook 0), released after C_1 existed
  auto late = f.extend(chain1[0], 1, 2, std::nullopt, 0u);

  auto chain2 = f.extend(chain1.back(), 5, 6, *c1, 1u);
  auto c2 = service_scan(svc, f.tree, 11);
  REQUIRE(c2.has_value());
  std::set<block_id> refs(c2->references.begin(), c2->references.end());
  CHECK_FALSE(refs.count(late[0])); // 2 - 0 > t
  (void)chain2;

  SUBCASE("fresh hooks are referenced") {
    auto fresh = f.extend(chain2[0], 1, 12, std::nullopt, 2u);
    f.extend(chain2.back(), 5, 12, *c2, 2u);
    auto c3 = service_scan(svc, f.tree, 17);
    REQUIRE(c3.has_value());
    std::set<block_id> refs3(c3->references.begin(), c3->references.end());
    CHECK(refs3.count(fresh[0]));
  }
}

TEST_CASE("delayed emission and reorg cancellation") {
  fixture f;
  service_state svc = make_service_state(3, 2, std::nullopt, 2);

  SUBCASE("emission waits service_delay rounds") {
    f.extend(f.genesis.id, 3, 1);
    CHECK_FALSE(service_scan(svc, f.tree, 3).has_value()); // trigger -> pending
    CHECK_FALSE(service_scan(svc, f.tree, 4).has_value());
    auto cert = service_scan(svc, f.tree, 5);
    REQUIRE(cert.has_value());
    CHECK(cert->issued_round == 5);
  }

  SUBCASE("candidate reorged away cancels the pending emission") {
    auto a = f.extend(f.genesis.id, 3, 1);
    CHECK_FALSE(service_scan(svc, f.tree, 3).has_value());
    // a longer branch displaces the candidate before the delay elapses
    auto b = f.extend(f.genesis.id, 4, 1);
    CHECK_FALSE(service_scan(svc, f.tree, 4).has_value()); // cancelled
    CHECK_FALSE(service_scan(svc, f.tree, 5).has_value()); // re-pends on b, due at 7
    CHECK_FALSE(service_scan(svc, f.tree, 6).has_value());
    auto cert = service_scan(svc, f.tree, 7);
    REQUIRE(cert.has_value());
    CHECK(cert->checkpointed_block == b[2]);
    CHECK(f.tree.is_ancestor(b[0], cert->checkpointed_block));
    (void)a;
  }
}

TEST_CASE("certificates checkpoint strictly descending blocks in index order") {
  fixture f;
  service_state svc = make_service_state(3, 2);
  block_id tip = f.genesis.id;
  certificate prev = svc.last_cert;
  std::optional<certificate> publish;
  for (int epoch = 0; epoch < 3; ++epoch) {
    tip = f.extend(tip, 3, 1 + epoch * 3, publish).back();
    auto cert = service_scan(svc, f.tree, (epoch + 1) * 3);
    REQUIRE(cert.has_value());
    CHECK(cert->index == prev.index + 1);
    CHECK(f.tree.is_ancestor(prev.checkpointed_block, cert->checkpointed_block));
    prev = *cert;
    publish = cert;
  }
}

TEST_CASE("closing certificate spans the whole tree") {
  fixture f;
  service_state svc = make_service_state(5, 2);
  auto chain = f.extend(f.genesis.id, 7, 1);
  auto uncles = f.extend(chain[2], 2, 4);
  REQUIRE(service_scan(svc, f.tree, 7).has_value());

  auto tip = chain.back();
  certificate closing = closing_certificate(svc, f.tree, tip, 20);
  std::set<block_id> covered = svc.referenced_blocks;
  for (const auto& id : f.tree.all_ids()) CHECK(covered.count(id));
  CHECK(closing.checkpointed_block == tip);
  (void)uncles;
}
