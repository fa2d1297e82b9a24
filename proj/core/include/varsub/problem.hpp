#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "varsub/embedding.hpp"
#include "varsub/topology.hpp"

namespace varsub {

struct ProblemError : std::runtime_error {
    int line;
    ProblemError(int l, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ": " + msg), line(l) {}
};

enum class SystemKind { SourceForm, Lagrangian, Forces };

// In-memory form of a problem file: a line-oriented sectioned format with
// [system], optional [embedding], [topology] and [oracle] sections,
// `key = value` entries, and expressions in double quotes.
struct Problem {
    JetSpace space;
    std::vector<std::string> params;
    SystemKind kind = SystemKind::SourceForm;
    std::vector<Expr> eps;    // SystemKind::SourceForm, ordered like fibers
    Expr lagrangian;          // SystemKind::Lagrangian
    std::vector<Expr> forces; // SystemKind::Forces, ordered like fibers
    std::optional<Embedding> embedding;
    std::optional<TopologyInfo> topology;
    std::optional<std::uint64_t> oracle_seed;
    std::optional<int> oracle_samples;
    std::optional<double> oracle_tol;

    // Base config with the file's [oracle] overrides applied.
    OracleConfig oracle(OracleConfig base = {}) const;

    friend bool operator==(const Problem& a, const Problem& b);
    friend bool operator!=(const Problem& a, const Problem& b) { return !(a == b); }
};

// Throws ProblemError (with a 1-based line number) on malformed sections,
// keys, expressions, or constraint violations; expression errors carry the
// inner byte offset in the message.
Problem parse_problem(const std::string& text);

Problem load_problem(const std::string& path);

// Canonical serialization; parse_problem(serialize_problem(p)) == p.
// Catalog embeddings are emitted in expanded map form.
std::string serialize_problem(const Problem& p);

// The source form the verdict pipeline works on: the eps components as
// given, the Euler-Lagrange form of the density, or y''^sigma - F^sigma for
// force systems.
SourceForm problem_source_form(const Problem& p);

} // namespace varsub
