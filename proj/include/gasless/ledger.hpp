#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gasless/address.hpp"
#include "gasless/hash.hpp"
#include "gasless/result.hpp"
#include "gasless/token.hpp"

namespace gasless {

struct Account {
    Address address;
    TokenAmount balance;
    TokenAmount staked;
    uint64_t nonce = 0;
};

struct GasParams {
    uint64_t gas_limit = 0;          // gas units
    TokenAmount base_fee;            // per gas unit
    TokenAmount priority_fee;        // per gas unit
};

// gas_limit x (base_fee + priority_fee), exact integer wei.
Result<TokenAmount> compute_gas_fee(const GasParams& p);

struct Block {
    uint64_t height = 0;
    Digest parent_digest{};
    uint64_t timestamp_ms = 0;
    Address proposer;
    std::vector<Digest> tx_digests;
    Digest state_root{};
};

Digest block_digest(const Block& b);

// Account map with value semantics; a copy is a snapshot. Single writer,
// snapshots readable from any thread.
class Ledger {
public:
    bool has(const Address& a) const { return accounts_.count(a) != 0; }
    const Account* find(const Address& a) const;
    Account& open(const Address& a);  // creates a zero account if absent

    TokenAmount balance(const Address& a) const;
    TokenAmount staked(const Address& a) const;
    uint64_t nonce(const Address& a) const;

    // Atomic: on any error the ledger is unchanged.
    Status transfer(const Address& from, const Address& to, TokenAmount amount);
    Status credit(const Address& to, TokenAmount amount);   // mint-style, traditional mode only
    Status debit(const Address& from, TokenAmount amount);  // burn-style, unused in gasless mode
    Status move_to_staked(const Address& a, TokenAmount amount);
    Status release_staked(const Address& a, TokenAmount amount);

    TokenAmount total_supply() const;

    // Canonical serialization: per account sorted by address,
    // address(20B) || balance(32B BE) || staked(32B BE) || nonce(8B BE).
    std::vector<uint8_t> canonical_serialization() const;
    Digest state_root() const;

    const std::map<Address, Account>& accounts() const { return accounts_; }

private:
    std::map<Address, Account> accounts_;
};

}  // namespace gasless
