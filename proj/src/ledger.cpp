#include "gasless/ledger.hpp"

namespace gasless {

Result<TokenAmount> compute_gas_fee(const GasParams& p) {
    auto per_unit = checked_add(p.base_fee, p.priority_fee);
    if (!per_unit) return per_unit.error();
    return checked_mul(per_unit.value(), p.gas_limit);
}

Digest block_digest(const Block& b) {
    std::vector<uint8_t> buf;
    auto h = to_be8(b.height);
    buf.insert(buf.end(), h.begin(), h.end());
    buf.insert(buf.end(), b.parent_digest.begin(), b.parent_digest.end());
    auto t = to_be8(b.timestamp_ms);
    buf.insert(buf.end(), t.begin(), t.end());
    buf.insert(buf.end(), b.proposer.id.begin(), b.proposer.id.end());
    for (const auto& d : b.tx_digests) buf.insert(buf.end(), d.begin(), d.end());
    buf.insert(buf.end(), b.state_root.begin(), b.state_root.end());
    return digest(buf);
}

const Account* Ledger::find(const Address& a) const {
    auto it = accounts_.find(a);
    return it == accounts_.end() ? nullptr : &it->second;
}

Account& Ledger::open(const Address& a) {
    auto it = accounts_.find(a);
    if (it == accounts_.end()) {
        it = accounts_.emplace(a, Account{a, {}, {}, 0}).first;
    }
    return it->second;
}

TokenAmount Ledger::balance(const Address& a) const {
    const Account* acc = find(a);
    return acc ? acc->balance : TokenAmount{};
}

TokenAmount Ledger::staked(const Address& a) const {
    const Account* acc = find(a);
    return acc ? acc->staked : TokenAmount{};
}

uint64_t Ledger::nonce(const Address& a) const {
    const Account* acc = find(a);
    return acc ? acc->nonce : 0;
}

Status Ledger::transfer(const Address& from, const Address& to, TokenAmount amount) {
    auto fit = accounts_.find(from);
    if (fit == accounts_.end()) return Err::UnknownAccount;
    if (fit->second.balance < amount) return Err::InsufficientBalance;
    fit->second.balance = checked_sub(fit->second.balance, amount).value();
    open(to).balance = checked_add(balance(to), amount).value();
    return Ok{};
}

Status Ledger::credit(const Address& to, TokenAmount amount) {
    auto sum = checked_add(balance(to), amount);
    if (!sum) return sum.error();
    open(to).balance = sum.value();
    return Ok{};
}

Status Ledger::debit(const Address& from, TokenAmount amount) {
    auto fit = accounts_.find(from);
    if (fit == accounts_.end()) return Err::UnknownAccount;
    auto rest = checked_sub(fit->second.balance, amount);
    if (!rest) return rest.error();
    fit->second.balance = rest.value();
    return Ok{};
}

Status Ledger::move_to_staked(const Address& a, TokenAmount amount) {
    auto it = accounts_.find(a);
    if (it == accounts_.end()) return Err::UnknownAccount;
    auto rest = checked_sub(it->second.balance, amount);
    if (!rest) return rest.error();
    it->second.balance = rest.value();
    it->second.staked = checked_add(it->second.staked, amount).value();
    return Ok{};
}

Status Ledger::release_staked(const Address& a, TokenAmount amount) {
    auto it = accounts_.find(a);
    if (it == accounts_.end()) return Err::UnknownAccount;
    auto rest = checked_sub(it->second.staked, amount);
    if (!rest) return rest.error();
    it->second.staked = rest.value();
    it->second.balance = checked_add(it->second.balance, amount).value();
    return Ok{};
}

TokenAmount Ledger::total_supply() const {
    TokenAmount sum;
    for (const auto& [addr, acc] : accounts_) {
        sum = checked_add(sum, acc.balance).value();
        sum = checked_add(sum, acc.staked).value();
    }
    return sum;
}

std::vector<uint8_t> Ledger::canonical_serialization() const {
    std::vector<uint8_t> buf;
    buf.reserve(accounts_.size() * 92);
    for (const auto& [addr, acc] : accounts_) {
        buf.insert(buf.end(), addr.id.begin(), addr.id.end());
        auto b = to_be32(acc.balance.wei);
        buf.insert(buf.end(), b.begin(), b.end());
        auto s = to_be32(acc.staked.wei);
        buf.insert(buf.end(), s.begin(), s.end());
        auto n = to_be8(acc.nonce);
        buf.insert(buf.end(), n.begin(), n.end());
    }
    return buf;
}

Digest Ledger::state_root() const {
    return digest(canonical_serialization());
}

}  // namespace gasless
