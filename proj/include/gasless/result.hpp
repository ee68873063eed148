#pragma once

#include <stdexcept>
#include <string>
#include <variant>

namespace gasless {

// Machine-readable failure reasons shared across modules.
enum class Err {
    ArithmeticOverflow,
    InsufficientBalance,
    UnknownAccount,
    BelowMinimumStake,
    SubnetActive,
    UnknownSubnet,
    EpochGap,
    StaleEpoch,
    MalformedSignature,
    RecoveryFailure,
    BadSignature,
    BadNonce,
    PaymentMissing,
    PaymentUnconfirmed,
    PaymentAlreadyConsumed,
    QueueFull,
    InsufficientEscrow,
    PoolUnderfunded,
    NotConfirmed,
    AlreadyConsumed,
    UnknownId,
    InsufficientFiat,
    NoStandbyAvailable,
    Throttled,
    EmptyWindow,
    ScenariosNotComparable,
    ConfigInvalid,
    UnsupportedFormat,
    NegativeInput,
};

const char* to_string(Err e);

template <typename T>
class Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(Err e) : v_(e) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    const T& value() const {
        if (!ok()) throw std::runtime_error(std::string("Result::value on error: ") + to_string(error()));
        return std::get<T>(v_);
    }
    T& value() {
        if (!ok()) throw std::runtime_error(std::string("Result::value on error: ") + to_string(error()));
        return std::get<T>(v_);
    }
    Err error() const { return std::get<Err>(v_); }

private:
    std::variant<T, Err> v_;
};

struct Ok {};

using Status = Result<Ok>;

// Thrown when a module invariant is violated; the CLI maps this to exit code 2.
class InvariantViolation : public std::logic_error {
public:
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

inline void invariant(bool cond, const char* what) {
    if (!cond) throw InvariantViolation(what);
}

}  // namespace gasless
