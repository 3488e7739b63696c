#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ccs {

// Base class for every error raised by the simulator or the algorithms
// running on top of it.
class SimError : public std::runtime_error {
public:
    explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

// A node's send or receive volume in a single routing invocation exceeded
// the configured O(n) budget (c_L * n words).
class LoadExceeded : public SimError {
public:
    LoadExceeded(uint32_t node, const char* direction, uint64_t words, uint64_t limit)
        : SimError("load exceeded: node " + std::to_string(node) + " " + direction + " " +
                   std::to_string(words) + " words (limit " + std::to_string(limit) + ")"),
          node(node),
          words(words),
          limit(limit) {}
    uint32_t node;
    uint64_t words;
    uint64_t limit;
};

// A gen_route target would receive more than c_L * n words.
class TargetOverloaded : public SimError {
public:
    TargetOverloaded(uint32_t node, uint64_t words, uint64_t limit)
        : SimError("gen_route target overloaded: node " + std::to_string(node) + " receives " +
                   std::to_string(words) + " words (limit " + std::to_string(limit) + ")"),
          node(node) {}
    uint32_t node;
};

class Unresolvable : public SimError {
public:
    Unresolvable(uint32_t resolving_node, uint64_t content)
        : SimError("query with content " + std::to_string(content) +
                   " rejected by resolving node " + std::to_string(resolving_node)) {}
};

class AuxBudgetExceeded : public SimError {
public:
    AuxBudgetExceeded(uint64_t requested, uint64_t limit)
        : SimError("auxiliary node budget exceeded: " + std::to_string(requested) + " > " +
                   std::to_string(limit)) {}
};

class IndexOutOfRange : public SimError {
public:
    IndexOutOfRange(uint64_t lo, uint64_t hi, uint64_t len)
        : SimError("index range [" + std::to_string(lo) + ".." + std::to_string(hi) +
                   "] invalid for array of length " + std::to_string(len)) {}
};

// A word does not fit in c_w * ceil(log2 n) bits.
class WordTooWide : public SimError {
public:
    WordTooWide(uint64_t value, uint64_t limit)
        : SimError("word value " + std::to_string(value) + " exceeds model bound " +
                   std::to_string(limit)) {}
};

class SizeClassViolation : public SimError {
public:
    SizeClassViolation(uint64_t size, uint64_t limit)
        : SimError("object of " + std::to_string(size) + " words exceeds declared class of " +
                   std::to_string(limit) + " words") {}
};

class PassBudgetExceeded : public SimError {
public:
    explicit PassBudgetExceeded(uint64_t longest)
        : SimError("string of length " + std::to_string(longest) +
                   " still longer than one block after 7 renaming passes") {}
};

class CompressionViolation : public SimError {
public:
    CompressionViolation()
        : SimError("window occurrences do not form an arithmetic progression") {}
};

class NoWitness : public SimError {
public:
    NoWitness()
        : SimError("representative objects share no sampled offset; difference cover broken") {}
};

class RecursionBudgetExceeded : public SimError {
public:
    RecursionBudgetExceeded(uint64_t depth, uint64_t limit)
        : SimError("recursion depth " + std::to_string(depth) + " exceeds budget " +
                   std::to_string(limit)) {}
};

class VerificationFailed : public SimError {
public:
    explicit VerificationFailed(const std::string& detail)
        : SimError("verification failed: " + detail) {}
};

class IoError : public SimError {
public:
    explicit IoError(const std::string& detail) : SimError("io error: " + detail) {}
};

}  // namespace ccs
