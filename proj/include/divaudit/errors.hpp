#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace divaudit {

// Base for every recoverable auditing failure. The report layer converts
// these into verdicts; only programmer errors surface as std::logic_error.
struct AuditError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : AuditError {
    using AuditError::AuditError;
};

struct ConfigError : AuditError {
    using AuditError::AuditError;
};

// Two individuals whose relative order changes the chosen type profile.
struct TieError : AuditError {
    std::vector<std::string> colliding_ids;
    TieError(std::string msg, std::vector<std::string> ids)
        : AuditError(std::move(msg)), colliding_ids(std::move(ids)) {}
};

struct IncompletePreferenceError : AuditError {
    using AuditError::AuditError;
};

struct CapExceededError : AuditError {
    unsigned long long required = 0;
    unsigned long long cap = 0;
    CapExceededError(std::string msg, unsigned long long req, unsigned long long limit)
        : AuditError(std::move(msg)), required(req), cap(limit) {}
};

struct PreconditionError : AuditError {
    using AuditError::AuditError;
};

// A rule returned two type-distinct chosen sets from one menu where a
// type-functional correspondence was required.
struct TypeFunctionalityError : AuditError {
    std::vector<std::string> menu_ids;
    TypeFunctionalityError(std::string msg, std::vector<std::string> menu)
        : AuditError(std::move(msg)), menu_ids(std::move(menu)) {}
};

}  // namespace divaudit
