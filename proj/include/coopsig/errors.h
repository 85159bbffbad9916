#pragma once

#include <stdexcept>
#include <string>

namespace coopsig {

// Base class for every error the engine raises on purpose. Callers that only
// want "did it work" can catch this; tests catch the precise subtype.
struct SimError : std::runtime_error {
    explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

// grid_env
struct BadArity : SimError {
    explicit BadArity(const std::string& what) : SimError(what) {}
};
struct InsufficientSpace : SimError {
    explicit InsufficientSpace(const std::string& what) : SimError(what) {}
};

// planning
struct BadOrigin : SimError {
    explicit BadOrigin(const std::string& what) : SimError(what) {}
};
struct Unreachable : SimError {
    explicit Unreachable(const std::string& what) : SimError(what) {}
};
struct EmptyChoiceSet : SimError {
    explicit EmptyChoiceSet(const std::string& what) : SimError(what) {}
};

// pragmatics / agents
struct NoConsistentReferent : SimError {
    explicit NoConsistentReferent(const std::string& what) : SimError(what) {}
};

// experiments / stats
struct EmptyGroup : SimError {
    explicit EmptyGroup(const std::string& what) : SimError(what) {}
};
struct InsufficientData : SimError {
    explicit InsufficientData(const std::string& what) : SimError(what) {}
};

// configuration / input files
struct ConfigError : SimError {
    explicit ConfigError(const std::string& what) : SimError(what) {}
};
struct DataError : SimError {
    explicit DataError(const std::string& what) : SimError(what) {}
};

}  // namespace coopsig
