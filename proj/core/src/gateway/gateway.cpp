#include "healthledger/gateway/gateway.hpp"

#include <algorithm>

#include "healthledger/chaincode/contracts.hpp"
#include "healthledger/common/error.hpp"

namespace hl::gateway {

Gateway::Gateway(net::Driver& driver, GatewayOptions options, std::uint64_t nonce_seed)
    : driver_(driver), options_(options), docs_(options.doc_limit), nonce_rng_(nonce_seed) {}

std::uint64_t Gateway::chain_height() {
  return driver_.call([](net::Network& n) {
    std::uint64_t h = 0;
    for (const auto& org : n.config().orgs) {
      if (n.alive(net::anchor_id(org.name))) h = std::max(h, n.anchor(org.name).height());
    }
    return h;
  });
}

// ---- identity -------------------------------------------------------------------

void Gateway::bootstrap() {
  {
    std::lock_guard lock(mutex_);
    if (bootstrapped_) fail(ErrorKind::AlreadyBootstrapped, "gateway already bootstrapped");
    bootstrapped_ = true;
  }
  auto orgs = driver_.call([](net::Network& n) { return n.config().orgs; });
  for (const auto& org : orgs) {
    auto admin = driver_.call([&](net::Network& n) { return n.default_admin(org.name); });
    if (!wallet_.contains(admin.identity_id)) wallet_.put(admin);
    auto key = identity::identity_key(admin.org, admin.identity_id);
    bool recorded = driver_.call([&](net::Network& n) { return n.anchor(org.name).state().get(key).has_value(); });
    if (recorded) continue;
    identity::Registration reg;
    {
      std::lock_guard lock(mutex_);
      reg = identity::password_registration(admin, "Default Admin", options_.default_admin_password, &nonce_rng_);
    }
    auto out = invoke_as(admin, "identity.register", Json::array({admin.identity_id, reg.state_record}));
    if (!out.receipt || !out.receipt->valid) fail(ErrorKind::Chaincode, "default admin registration was not committed");
  }
}

Session Gateway::login(const std::string& identity_id, std::string_view password) {
  auto card = wallet_.get(identity_id);
  if (!card) fail(ErrorKind::InvalidIdentity, "Invalid Identity");
  catch_up({card->org});
  auto grant = driver_.call([&](net::Network& n) {
    return identity::authenticate(identity_id, password, wallet_, n.anchor(card->org).state());
  });
  auto invoker = driver_.call([&](net::Network& n) { return n.msp()->resolve(grant.card.certificate); });
  Session s{grant.session_token, identity_id, grant.card.org, invoker.stakeholder, driver_.now_ms()};
  std::lock_guard lock(mutex_);
  sessions_[s.token] = s;
  return s;
}

void Gateway::logout(const std::string& token) {
  std::lock_guard lock(mutex_);
  sessions_.erase(token);
}

Session Gateway::session(const std::string& token) {
  auto now = driver_.now_ms();
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) fail(ErrorKind::SessionExpired, "no such session");
  if (now - it->second.last_seen_ms > options_.session_idle_ms) {
    sessions_.erase(it);
    fail(ErrorKind::SessionExpired, "session expired");
  }
  it->second.last_seen_ms = now;
  return it->second;
}

identity::HealthCard Gateway::card_for(const Session& s) const {
  auto card = wallet_.get(s.identity_id);
  if (!card) fail(ErrorKind::InvalidIdentity, "Invalid Identity");
  return *card;
}

identity::HealthCard Gateway::register_user(const std::string& token, const identity::UserProfile& profile,
                                            identity::Role role, std::string_view password) {
  auto admin = card_for(session(token));
  identity::Registration reg;
  {
    std::lock_guard lock(mutex_);
    reg = driver_.call([&](net::Network& n) {
      return identity::register_user(n.ca(admin.org), wallet_, admin, profile, role, password, nonce_rng_);
    });
  }
  try {
    auto out = invoke_as(admin, "identity.register", Json::array({profile.identity_id, reg.state_record}));
    if (!out.receipt || !out.receipt->valid) {
      fail(ErrorKind::Chaincode, "registration of '" + profile.identity_id + "' lost a commit conflict");
    }
  } catch (...) {
    wallet_.remove(profile.identity_id);
    throw;
  }
  return reg.card;
}

// ---- transaction flow -------------------------------------------------------------

ledger::Proposal Gateway::propose(const identity::HealthCard& card, const std::string& fn, Json args) {
  Bytes nonce;
  {
    std::lock_guard lock(mutex_);
    nonce = nonce_rng_.bytes(16);
  }
  return make_proposal(card, fn, std::move(args), std::move(nonce), driver_.now_ms());
}

void Gateway::catch_up(const std::vector<std::string>& orgs) {
  auto target = seen_height_.load();
  if (target == 0) return;
  // A lagging or cut-off anchor is left to fail on its own terms.
  driver_.await(
      [&](const net::Network& n) {
        return std::all_of(orgs.begin(), orgs.end(), [&](const std::string& org) {
          auto id = net::anchor_id(org);
          return !n.reachable(std::string(net::kGatewayNode), id) || n.anchor(org).height() >= target;
        });
      },
      options_.commit_timeout_ms);
}

Endorsed Gateway::endorse(const ledger::Proposal& proposal) {
  if (options_.policy == EndorsementPolicy::InvokerOrg) {
    catch_up({proposal.invoker_cert.org});
  } else {
    auto orgs = driver_.call([](net::Network& n) {
      std::vector<std::string> out;
      for (const auto& o : n.config().orgs) out.push_back(o.name);
      return out;
    });
    catch_up(orgs);
  }
  return driver_.call([&](net::Network& n) {
    const auto& org = proposal.invoker_cert.org;
    if (!n.alive(net::anchor_id(org)) || !n.reachable(std::string(net::kGatewayNode), net::anchor_id(org))) {
      fail(ErrorKind::PolicyUnsatisfied, "anchor peer of " + org + " is unavailable");
    }
    auto first = n.anchor(org).endorse(proposal);
    if (options_.policy == EndorsementPolicy::InvokerOrg) return first;
    for (const auto& o : n.config().orgs) {
      if (o.name == org) continue;
      auto id = net::anchor_id(o.name);
      if (!n.reachable(std::string(net::kGatewayNode), id)) {
        fail(ErrorKind::PolicyUnsatisfied, "anchor peer of " + o.name + " is unavailable");
      }
      auto other = n.anchor(o.name).endorse(proposal);
      if (other.tx.endorsements[0].response_digest != first.tx.endorsements[0].response_digest) {
        fail(ErrorKind::PolicyUnsatisfied, "endorsers disagree on the proposal response");
      }
      first.tx.endorsements.push_back(other.tx.endorsements[0]);
    }
    return first;
  });
}

std::string Gateway::submit_once(const ledger::Transaction& tx, std::string target) {
  auto ids = driver_.call([](net::Network& n) { return n.orderer_ids(); });
  auto next_of = [&](const std::string& id) {
    auto it = std::find(ids.begin(), ids.end(), id);
    return (it == ids.end() || std::next(it) == ids.end()) ? ids.front() : *std::next(it);
  };
  if (std::find(ids.begin(), ids.end(), target) == ids.end()) target = ids.front();

  std::size_t hops = 0;
  for (std::size_t attempt = 0; attempt < ids.size() + options_.max_leader_hops; ++attempt) {
    ordering::SubmitResult res;
    try {
      res = driver_.call([&](net::Network& n) { return n.submit(target, tx); });
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TargetUnreachable) throw;
      target = next_of(target);
      continue;
    }
    if (std::holds_alternative<ordering::Accepted>(res)) return target;
    const auto& hint = std::get<ordering::NotLeader>(res).hint;
    if (hint && *hint != target && hops < options_.max_leader_hops) {
      target = *hint;
      ++hops;
    } else {
      target = next_of(target);
    }
  }
  return target;
}

CommitReceipt Gateway::submit_and_wait(const ledger::Transaction& tx, std::int64_t timeout_ms) {
  const auto org = tx.proposal.invoker_cert.org;
  driver_.with([&](net::Network& n) {
    bool ok = std::any_of(tx.endorsements.begin(), tx.endorsements.end(), [&](const ledger::Endorsement& e) {
      return e.endorser_cert.org == org && verify_endorsement(e, tx, *n.msp());
    });
    if (ok && options_.policy == EndorsementPolicy::AllOrgs) {
      for (const auto& o : n.config().orgs) {
        ok = ok && std::any_of(tx.endorsements.begin(), tx.endorsements.end(), [&](const ledger::Endorsement& e) {
               return e.endorser_cert.org == o.name && verify_endorsement(e, tx, *n.msp());
             });
      }
    }
    if (!ok) fail(ErrorKind::PolicyUnsatisfied, "transaction lacks a valid endorsement from " + org);
  });

  const auto deadline = driver_.now_ms() + timeout_ms;
  std::string target;
  {
    std::lock_guard lock(mutex_);
    target = last_leader_;
  }
  auto committed = [&](const net::Network& n) { return n.anchor(org).receipt(tx.tx_id).has_value(); };
  while (true) {
    target = submit_once(tx, target);
    {
      std::lock_guard lock(mutex_);
      last_leader_ = target;
    }
    auto remaining = deadline - driver_.now_ms();
    if (remaining > 0 && driver_.await(committed, std::min(remaining, options_.resubmit_after_ms))) {
      auto receipt = *driver_.call([&](net::Network& n) { return n.anchor(org).receipt(tx.tx_id); });
      auto seen = seen_height_.load();
      while (receipt.block_number + 1 > seen && !seen_height_.compare_exchange_weak(seen, receipt.block_number + 1)) {
      }
      return receipt;
    }
    if (driver_.now_ms() >= deadline) {
      fail(ErrorKind::Timeout, "transaction " + tx.tx_id.hex() + " not committed within " +
                                   std::to_string(timeout_ms) + " ms");
    }
  }
}

InvokeResult Gateway::invoke_as(const identity::HealthCard& card, const std::string& fn, Json args) {
  const auto* spec = chaincode::find_function(fn);
  if (!spec) fail(ErrorKind::NotFound, "unknown contract function '" + fn + "'");
  auto proposal = propose(card, fn, std::move(args));
  if (spec->query) {
    catch_up({card.org});
    auto result = driver_.call([&](net::Network& n) {
      if (!n.reachable(std::string(net::kGatewayNode), net::anchor_id(card.org))) {
        fail(ErrorKind::PolicyUnsatisfied, "anchor peer of " + card.org + " is unavailable");
      }
      return n.anchor(card.org).query(proposal);
    });
    return InvokeResult{std::move(result), ledger::compute_tx_id(proposal), std::nullopt};
  }
  auto endorsed = endorse(proposal);
  auto receipt = submit_and_wait(endorsed.tx, options_.commit_timeout_ms);
  return InvokeResult{std::move(endorsed.result), endorsed.tx.tx_id, receipt};
}

InvokeResult Gateway::invoke(const std::string& token, const std::string& fn, Json args) {
  return invoke_as(card_for(session(token)), fn, std::move(args));
}

// ---- documents ------------------------------------------------------------------------

Digest256 Gateway::put_document(const std::string& token, Bytes content, std::string media_type) {
  session(token);
  return docs_.put(std::move(content), std::move(media_type));
}

OffChainDoc Gateway::get_document(const std::string& token, const Digest256& digest) {
  session(token);
  return docs_.get(digest);
}

}  // namespace hl::gateway
