#ifndef ASOS_ERRORS_HPP
#define ASOS_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace asos {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An id that does not resolve to an existing component.
class ReferenceError : public Error {
public:
    explicit ReferenceError(const std::string& what) : Error(what) {}
};

/// A call that violates an interface contract (arity, shape, range).
class ContractError : public Error {
public:
    explicit ContractError(const std::string& what) : Error(what) {}
};

class CycleError : public Error {
public:
    CycleError(const std::string& what, std::vector<int> cycle_nodes)
        : Error(what), nodes(std::move(cycle_nodes)) {}
    std::vector<int> nodes;
};

class DecodeError : public Error {
public:
    DecodeError(const std::string& what, std::size_t at_offset)
        : Error(what + " (offset " + std::to_string(at_offset) + ")"), offset(at_offset) {}
    std::size_t offset;
};

/// Runtime failure inside a mechanism function during plan execution.
class StepError : public Error {
public:
    StepError(const std::string& what, int mechanism)
        : Error(what), mechanism_id(mechanism) {}
    int mechanism_id;
};

class LoadError : public Error {
public:
    LoadError(const std::string& what, long row = -1)
        : Error(row >= 0 ? what + " (row " + std::to_string(row) + ")" : what), row_number(row) {}
    long row_number;
};

class TrainingError : public Error {
public:
    TrainingError(const std::string& what, int agent)
        : Error(what), agent_index(agent) {}
    int agent_index;
};

} // namespace asos

#endif
