#pragma once
// Range surveys: checkpointed scans that compute exceptional sets (values
// with no constrained witness), closed-form expected exceptional families,
// and the registry of named conjecture checks built on both.
#include "sums4/construct.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sums4 {

// Which scanned values participate in a task. All filters compose (AND).
struct DomainFilter {
    u64 modulus = 0;            // 0 = no residue filter
    std::vector<u64> allowed;   // residues mod modulus that participate
    bool squares_only = false;  // m must be a perfect square
    bool pow4_form_only = false; // m must be 4^a(4b+1)
    u64 greater_than = 0;       // m must exceed this (0 = no bound)

    bool accepts(u64 m) const;
    std::string key() const; // canonical text, part of the task identity
};

enum class WitnessMode { StoreFirstWitness, ExistenceOnly };

struct ScanTask {
    ConstraintSpec spec;
    u64 lo = 1, hi = 0; // inclusive range
    DomainFilter filter;
    bool signed_search = false;
    WitnessMode witness_mode = WitnessMode::StoreFirstWitness;

    std::string canonical() const; // versioned task identity string
    u64 identity_hash() const;     // FNV-1a 64 of canonical()
};

struct ScanReport {
    ScanTask task;
    std::vector<u64> exceptional;                 // ascending, includes checkpointed prefix
    std::map<u64, SignedDecomposition> witnesses; // segment scanned by this invocation
    u64 cursor = 0;     // last value (filtered or not) fully processed
    bool complete = false;
    u64 processed = 0;  // filter-passing values decided this invocation
    double wall_ms = 0.0;
    double per_m_us = 0.0;
};

struct ScanOptions {
    int jobs = 1;
    std::string checkpoint_path; // empty = no checkpointing
    u64 checkpoint_stride = 1 << 16; // processed values between checkpoint writes
    u64 stop_after = 0; // pause after this many processed values (0 = run to hi); serial only
};

// Scan task.lo..task.hi (resuming from the checkpoint when one exists and
// matches the task identity), deciding for each filter-passing m whether a
// constrained witness exists. Deterministic: parallel runs produce the same
// report as serial ones.
ScanReport run_scan(const ScanTask& task, const ScanOptions& opts = {});

// Exceptional set of a spec over [1, bound] with no filter.
std::vector<u64> exceptional_set(const ConstraintSpec& spec, u64 bound);

// Closed-form family: geometric members q * 2^(4a+k) for each (q, k) pair,
// a = 0,1,2,..., plus an explicit finite list.
struct ExceptionalFamily {
    std::vector<std::pair<u64, unsigned>> geometric;
    std::vector<u64> finite;

    std::vector<u64> members_up_to(u64 bound) const; // ascending, deduplicated
};

std::vector<u64> expected_exceptional(const ExceptionalFamily& family, u64 bound);

// One scan together with what its exceptional set should be (nullopt =
// expected empty).
struct ConjectureCheck {
    std::string label; // distinguishes multi-scan entries
    ScanTask task;     // hi is filled in from the bound at verification time
    std::optional<ExceptionalFamily> expected;
};

struct ConjectureEntry {
    std::string name;
    std::string statement;
    std::vector<ConjectureCheck> checks;
};

const std::vector<ConjectureEntry>& conjecture_registry();
const ConjectureEntry* find_conjecture(const std::string& name);

struct VerifyOutcome {
    bool pass = false;
    std::optional<u64> first_counterexample; // first mismatch, either direction
    std::string failing_label;
    std::vector<u64> observed; // from the failing check, or the last one
    std::vector<u64> expected;
    std::vector<ScanReport> reports; // one per check, in registry order
};

// Run every check of the named conjecture up to the bound. Unknown names
// throw std::invalid_argument. opts.checkpoint_path, when set, is used as a
// prefix (one file per check).
VerifyOutcome verify_conjecture(const std::string& name, u64 bound, const ScanOptions& opts = {});

// Serialization. All formats carry a versioned leading header line.
void write_report_text(const ScanReport& report, const std::string& path);
void write_summary_json(const ScanReport& report, const std::string& path);

struct Checkpoint {
    u64 task_hash = 0;
    u64 cursor = 0;
    std::vector<u64> exceptional;
};

// nullopt when the file does not exist; malformed contents throw.
std::optional<Checkpoint> load_checkpoint(const std::string& path);
// Atomic: written to a temp file and renamed into place.
void save_checkpoint(const Checkpoint& cp, const std::string& path);

} // namespace sums4
