#include "sums4/survey.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace sums4 {

namespace {

u64 fnv1a(const std::string& s) {
    u64 h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex16(u64 v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct BlockResult {
    std::vector<u64> exceptional;
    std::map<u64, SignedDecomposition> witnesses;
    u64 processed = 0;
};

void decide_one(const ScanTask& task, u64 m, BlockResult& res) {
    std::optional<SignedDecomposition> wit;
    if (task.signed_search) {
        wit = find_constrained_signed(m, task.spec);
    } else if (auto q = find_constrained(m, task.spec)) {
        wit = SignedDecomposition{i64(q->x), i64(q->y), i64(q->z), i64(q->w)};
    }
    ++res.processed;
    if (!wit) {
        res.exceptional.push_back(m);
        return;
    }
    assert(evaluate(task.spec, *wit));
    if (task.witness_mode == WitnessMode::StoreFirstWitness) res.witnesses.emplace(m, *wit);
}

BlockResult scan_block(const ScanTask& task, u64 lo, u64 hi) {
    BlockResult res;
    for (u64 m = lo;; ++m) {
        if (task.filter.accepts(m)) decide_one(task, m, res);
        if (m == hi) break;
    }
    return res;
}

} // namespace

bool DomainFilter::accepts(u64 m) const {
    if (greater_than != 0 && m <= greater_than) return false;
    if (modulus != 0 &&
        std::find(allowed.begin(), allowed.end(), m % modulus) == allowed.end())
        return false;
    if (squares_only && !is_square(m)) return false;
    if (pow4_form_only && !is_pow4_times_4b1(m)) return false;
    return true;
}

std::string DomainFilter::key() const {
    std::ostringstream os;
    os << "mod=" << modulus << ':';
    for (size_t i = 0; i < allowed.size(); ++i) os << (i ? "," : "") << allowed[i];
    os << ";sq=" << squares_only << ";p4=" << pow4_form_only << ";gt=" << greater_than;
    return os.str();
}

std::string ScanTask::canonical() const {
    std::ostringstream os;
    os << "sums4-task-v1|" << spec.key() << "|lo=" << lo << "|hi=" << hi << '|' << filter.key()
       << "|signed=" << signed_search
       << "|mode=" << (witness_mode == WitnessMode::StoreFirstWitness ? "wit" : "exist");
    return os.str();
}

u64 ScanTask::identity_hash() const { return fnv1a(canonical()); }

ScanReport run_scan(const ScanTask& task, const ScanOptions& opts) {
    if (task.hi < task.lo) throw std::invalid_argument("scan range is empty");
    if (task.signed_search && !task.spec.is_linear())
        throw std::invalid_argument("signed scans require a linear form");
    const auto t0 = std::chrono::steady_clock::now();

    ScanReport rep;
    rep.task = task;
    const u64 hash = task.identity_hash();
    u64 start = task.lo;
    bool resumed_done = false;

    if (!opts.checkpoint_path.empty()) {
        if (auto cp = load_checkpoint(opts.checkpoint_path)) {
            if (cp->task_hash != hash)
                throw std::runtime_error("checkpoint at '" + opts.checkpoint_path +
                                         "' belongs to a different task");
            rep.exceptional = cp->exceptional;
            if (cp->cursor >= task.hi) {
                rep.cursor = task.hi;
                resumed_done = true;
            } else {
                start = std::max(start, cp->cursor + 1);
            }
        }
    }

    u64 since_ckpt = 0;
    auto checkpoint_now = [&](u64 cursor) {
        if (opts.checkpoint_path.empty()) return;
        save_checkpoint(Checkpoint{hash, cursor, rep.exceptional}, opts.checkpoint_path);
        since_ckpt = 0;
    };

    if (!resumed_done) {
        const int jobs = std::max(1, opts.jobs);
        if (jobs == 1 || opts.stop_after > 0) {
            BlockResult acc;
            for (u64 m = start;; ++m) {
                if (task.filter.accepts(m)) {
                    decide_one(task, m, acc);
                    ++since_ckpt;
                    if (opts.stop_after != 0 && acc.processed >= opts.stop_after) {
                        rep.cursor = m;
                        break;
                    }
                    if (since_ckpt >= opts.checkpoint_stride) {
                        rep.exceptional.insert(rep.exceptional.end(), acc.exceptional.begin(),
                                               acc.exceptional.end());
                        acc.exceptional.clear();
                        checkpoint_now(m);
                    }
                }
                if (m == task.hi) {
                    rep.cursor = m;
                    break;
                }
            }
            rep.exceptional.insert(rep.exceptional.end(), acc.exceptional.begin(),
                                   acc.exceptional.end());
            rep.witnesses = std::move(acc.witnesses);
            rep.processed = acc.processed;
        } else {
            constexpr u64 kBlock = 2048;
            const u64 nblocks = (task.hi - start) / kBlock + 1;
            std::atomic<u64> next{0};
            std::mutex mu;
            std::map<u64, BlockResult> parked;
            u64 frontier = 0;
            std::exception_ptr first_error;

            auto worker = [&] {
                try {
                    while (true) {
                        const u64 bi = next.fetch_add(1);
                        if (bi >= nblocks) return;
                        const u64 blo = start + bi * kBlock;
                        const u64 bhi = std::min(task.hi, blo + kBlock - 1);
                        BlockResult res = scan_block(task, blo, bhi);
                        std::lock_guard<std::mutex> lock(mu);
                        parked.emplace(bi, std::move(res));
                        while (true) {
                            auto it = parked.find(frontier);
                            if (it == parked.end()) break;
                            BlockResult& br = it->second;
                            rep.exceptional.insert(rep.exceptional.end(), br.exceptional.begin(),
                                                   br.exceptional.end());
                            rep.witnesses.insert(br.witnesses.begin(), br.witnesses.end());
                            rep.processed += br.processed;
                            since_ckpt += br.processed;
                            rep.cursor = std::min(task.hi, start + frontier * kBlock + kBlock - 1);
                            parked.erase(it);
                            ++frontier;
                            if (since_ckpt >= opts.checkpoint_stride) checkpoint_now(rep.cursor);
                        }
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!first_error) first_error = std::current_exception();
                    next.store(nblocks); // stop claiming further blocks
                }
            };

            std::vector<std::thread> pool;
            for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
            if (first_error) std::rethrow_exception(first_error);
        }
    }

    rep.complete = rep.cursor >= task.hi;
    if (!opts.checkpoint_path.empty()) checkpoint_now(rep.cursor);
    const auto t1 = std::chrono::steady_clock::now();
    rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rep.per_m_us = rep.processed ? 1000.0 * rep.wall_ms / double(rep.processed) : 0.0;
    return rep;
}

std::vector<u64> exceptional_set(const ConstraintSpec& spec, u64 bound) {
    ScanTask t;
    t.spec = spec;
    t.lo = 1;
    t.hi = bound;
    t.witness_mode = WitnessMode::ExistenceOnly;
    return run_scan(t).exceptional;
}

std::vector<u64> ExceptionalFamily::members_up_to(u64 bound) const {
    std::vector<u64> out;
    for (const auto& [q, k] : geometric) {
        for (u128 v = u128(q) << k; v <= bound; v <<= 4) {
            out.push_back(u64(v));
            if (v > (u128(~u64(0)) >> 4)) break;
        }
    }
    for (u64 f : finite)
        if (f <= bound) out.push_back(f);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<u64> expected_exceptional(const ExceptionalFamily& family, u64 bound) {
    return family.members_up_to(bound);
}

namespace {

ConstraintSpec lin(i64 a, i64 b, i64 c, i64 d, TargetKind k) {
    return ConstraintSpec{LinearForm4{a, b, c, d}, TargetSet{k, false}};
}

ConstraintSpec quad(i64 p, i64 q, i64 r, TargetKind k) {
    return ConstraintSpec{QuadFormXY{p, q, r}, TargetSet{k, false}};
}

ScanTask task_of(ConstraintSpec spec, DomainFilter filter) {
    ScanTask t;
    t.spec = std::move(spec);
    t.filter = std::move(filter);
    t.witness_mode = WitnessMode::ExistenceOnly;
    return t;
}

} // namespace

const std::vector<ConjectureEntry>& conjecture_registry() {
    static const std::vector<ConjectureEntry> kReg = [] {
        std::vector<ConjectureEntry> R;

        const DomainFilter all{};
        const DomainFilter odd{2, {1}};
        const DomainFilter not_0_2_mod8{8, {1, 3, 4, 5, 6, 7}};
        const DomainFilter not_0_6_mod8{8, {1, 2, 3, 4, 5, 7}};
        const DomainFilter mod4_in_1_2{4, {1, 2}};
        DomainFilter squares;
        squares.squares_only = true;

        auto single = [&R](std::string name, std::string stmt, ScanTask t,
                           std::optional<ExceptionalFamily> fam) {
            ConjectureEntry e;
            e.name = std::move(name);
            e.statement = std::move(stmt);
            e.checks.push_back(ConjectureCheck{"", std::move(t), std::move(fam)});
            R.push_back(std::move(e));
        };

        single("C1.1-weak", "every positive odd m has a natural quadruple with x+2y+3z in {2^a : a>=1}",
               task_of(lin(1, 2, 3, 0, TargetKind::Pow2Positive), odd), std::nullopt);
        {
            DomainFilter f = not_0_2_mod8;
            f.greater_than = 4627;
            single("C1.1-strong",
                   "every m > 4627 with m != 0,2 (mod 8) has a natural quadruple with x+2y+3z in {4^a : a>=1}",
                   task_of(lin(1, 2, 3, 0, TargetKind::Pow4Positive), f), std::nullopt);
        }
        {
            DomainFilter f = odd;
            f.greater_than = 1;
            single("C4.1a", "every odd m > 1 has a natural quadruple with x+y in {2^a : a>=1}",
                   task_of(lin(1, 1, 0, 0, TargetKind::Pow2Positive), f), std::nullopt);
        }
        single("C4.1b",
               "for m != 0,6 (mod 8), the m with no natural quadruple having x+y in {4^a : a>=1} "
               "are exactly 23 values ending at 1987",
               task_of(lin(1, 1, 0, 0, TargetKind::Pow4Positive), not_0_6_mod8),
               ExceptionalFamily{{},
                                 {1, 2, 3, 4, 5, 7, 31, 43, 67, 79, 85, 87, 103, 115, 475, 643,
                                  1015, 1399, 1495, 1723, 1819, 1939, 1987}});
        single("C4.2a", "every positive odd m has a natural quadruple with x+y+2z in {2^a : a>=1}",
               task_of(lin(1, 1, 2, 0, TargetKind::Pow2Positive), odd), std::nullopt);
        {
            DomainFilter f = not_0_2_mod8;
            f.greater_than = 10840;
            single("C4.2b",
                   "every m > 10840 with m != 0,2 (mod 8) has a natural quadruple with x+y+2z in {4^a : a>=1}",
                   task_of(lin(1, 1, 2, 0, TargetKind::Pow4Positive), f), std::nullopt);
        }
        single("C4.3a", "every m >= 1 has a natural quadruple with 2x^2+4y^2-7xy in {2^a : a>=0}",
               task_of(quad(2, 4, -7, TargetKind::Pow2Any), all), std::nullopt);
        single("C4.3b",
               "every m = 1,2 (mod 4) has a natural quadruple with 2x^2+4y^2-7xy in {4^a : a>=1}",
               task_of(quad(2, 4, -7, TargetKind::Pow4Positive), mod4_in_1_2), std::nullopt);
        single("C4.4a", "every m >= 1 has a natural quadruple with x^2+26y^2-11xy in {2^a : a>=0}",
               task_of(quad(1, 26, -11, TargetKind::Pow2Any), all), std::nullopt);
        single("C4.4b",
               "every m = 1,2 (mod 4) has a natural quadruple with x^2+26y^2-11xy in {4^a : a>=0}",
               task_of(quad(1, 26, -11, TargetKind::Pow4Any), mod4_in_1_2), std::nullopt);
        for (i64 lam : {2, 3, 4}) {
            single("C4.5(" + std::to_string(lam) + ")",
                   "every positive square has a natural quadruple with x+2y+2z+" +
                       std::to_string(lam) + "w a square",
                   task_of(lin(1, 2, 2, lam, TargetKind::Square), squares), std::nullopt);
        }
        for (i64 lam : {1, 2, 3}) {
            single("Conj2(" + std::to_string(lam) + ")",
                   "every positive square has a natural quadruple with x+2y+4z+" +
                       std::to_string(lam) + "w in {2^a : a>=0}",
                   task_of(lin(1, 2, 4, lam, TargetKind::Pow2Any), squares), std::nullopt);
        }
        single("Conj2-alt",
               "every positive square has a natural quadruple with x+3y+3z+4w in {2^a : a>=0}",
               task_of(lin(1, 3, 3, 4, TargetKind::Pow2Any), squares), std::nullopt);
        for (int d : {0, 1}) {
            DomainFilter f = squares;
            f.greater_than = u64(d);
            single("C4.6(" + std::to_string(d) + ")",
                   "every square m^2 (m > " + std::to_string(d) +
                       ") has a natural quadruple with x+3y and also x or y in {2^(2a+" +
                       std::to_string(d) + ")}",
                   task_of(named_spec("C4.6:d=" + std::to_string(d)), f), std::nullopt);
        }
        for (i64 lam : {2, 8})
            for (int d : {0, 1}) {
                single("C4.7(" + std::to_string(lam) + "," + std::to_string(d) + ")",
                       "every positive square has a natural quadruple with x or y a power of two and x+" +
                           std::to_string(lam) + "y in {2^(2a+" + std::to_string(d) + ")}",
                       task_of(named_spec("C4.7:l=" + std::to_string(lam) +
                                          ",d=" + std::to_string(d)),
                               squares),
                       std::nullopt);
            }
        for (int d : {0, 1}) {
            DomainFilter f = squares;
            f.greater_than = u64(d);
            single("C4.8a(" + std::to_string(d) + ")",
                   "every square m^2 (m > " + std::to_string(d) +
                       ") has a natural quadruple with x+15y and also x or 2y in {2^(2a+" +
                       std::to_string(d) + ")}",
                   task_of(named_spec("C4.8a:d=" + std::to_string(d)), f), std::nullopt);
            single("C4.8b(" + std::to_string(d) + ")",
                   "every square m^2 (m > " + std::to_string(d) +
                       ") has a natural quadruple with 16x-15y in {2^(2a+" + std::to_string(d) +
                       ")}",
                   task_of(named_spec("C4.8b:d=" + std::to_string(d)), f), std::nullopt);
        }
        single("C4.9",
               "every positive square has a natural quadruple with x+63y in {2^(2a+1)} and 2x or y in {4^a}",
               task_of(named_spec("C4.9"), squares), std::nullopt);

        {
            ConjectureEntry e;
            e.name = "C4.10-families";
            e.statement = "closed-form exceptional families for fifteen linear forms (square target)";
            auto fam1 = [](u64 q, unsigned k) { return ExceptionalFamily{{{q, k}}, {}}; };
            auto add = [&](const char* label, i64 a, i64 b, i64 c, ExceptionalFamily fam) {
                e.checks.push_back(ConjectureCheck{label,
                                                   task_of(lin(a, b, c, 0, TargetKind::Square), {}),
                                                   std::move(fam)});
            };
            add("x-2y", 1, -2, 0, fam1(43, 0));
            add("4x-y", 4, -1, 0, fam1(7, 0));
            add("3x-2y", 3, -2, 0, fam1(3, 3));
            add("5x-y", 5, -1, 0, fam1(3, 3));
            add("7x-3y", 7, -3, 0, fam1(3, 3));
            add("32x-15y", 32, -15, 0, fam1(3, 3));
            add("x+4y", 1, 4, 0, ExceptionalFamily{{{3, 2}, {23, 2}}, {}});
            add("2x+7y", 2, 7, 0, fam1(35, 0));
            add("8x+9y", 8, 9, 0, fam1(47, 0));
            add("x+2y+4z", 1, 2, 4, fam1(3, 0));
            add("x+2y+6z", 1, 2, 6, fam1(15, 0));
            add("2x+3y+4z", 2, 3, 4, fam1(3, 1));
            add("2x+4y+5z", 2, 4, 5, fam1(3, 2));
            add("4x+5y+8z", 4, 5, 8, fam1(23, 0));
            add("2x+6y+14z", 2, 6, 14, ExceptionalFamily{{{7, 2}, {31, 2}}, {}});
            R.push_back(std::move(e));
        }

        single("C4.11",
               "the m with no natural quadruple having x+3y+4z a square are exactly {2^(4a+3) q : q in {1,3,5,43}}",
               task_of(lin(1, 3, 4, 0, TargetKind::Square), all),
               ExceptionalFamily{{{1, 3}, {3, 3}, {5, 3}, {43, 3}}, {}});
        single("C4.12",
               "the m with no natural quadruple having 3x+10y+36z a positive square are exactly {2^(4a+3) q : q in {1,3,5,61}}",
               task_of(lin(3, 10, 36, 0, TargetKind::PositiveSquare), all),
               ExceptionalFamily{{{1, 3}, {3, 3}, {5, 3}, {61, 3}}, {}});

        return R;
    }();
    return kReg;
}

const ConjectureEntry* find_conjecture(const std::string& name) {
    for (const auto& e : conjecture_registry())
        if (e.name == name) return &e;
    return nullptr;
}

VerifyOutcome verify_conjecture(const std::string& name, u64 bound, const ScanOptions& opts) {
    const ConjectureEntry* entry = find_conjecture(name);
    if (!entry) throw std::invalid_argument("unknown conjecture '" + name + "'");
    if (bound == 0) throw std::invalid_argument("bound must be positive");

    VerifyOutcome out;
    out.pass = true;
    int idx = 0;
    for (const auto& chk : entry->checks) {
        ScanTask t = chk.task;
        t.lo = 1;
        t.hi = bound;
        ScanOptions o = opts;
        if (!opts.checkpoint_path.empty() && entry->checks.size() > 1)
            o.checkpoint_path = opts.checkpoint_path + "." + std::to_string(idx);
        ScanReport rep = run_scan(t, o);
        std::vector<u64> expect =
            chk.expected ? chk.expected->members_up_to(bound) : std::vector<u64>{};
        const bool ok = rep.exceptional == expect;
        if (ok && out.pass) {
            out.observed = rep.exceptional;
            out.expected = std::move(expect);
        } else if (!ok && out.pass) {
            out.pass = false;
            out.failing_label = chk.label;
            size_t i = 0, j = 0;
            while (i < rep.exceptional.size() && j < expect.size() &&
                   rep.exceptional[i] == expect[j]) {
                ++i;
                ++j;
            }
            if (i < rep.exceptional.size() && j < expect.size())
                out.first_counterexample = std::min(rep.exceptional[i], expect[j]);
            else if (i < rep.exceptional.size())
                out.first_counterexample = rep.exceptional[i];
            else if (j < expect.size())
                out.first_counterexample = expect[j];
            out.observed = rep.exceptional;
            out.expected = std::move(expect);
        }
        out.reports.push_back(std::move(rep));
        ++idx;
    }
    return out;
}

void write_report_text(const ScanReport& rep, const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open report file '" + path + "'");
    os << "# sums4 scan report v1\n";
    os << "# task: " << rep.task.canonical() << '\n';
    os << "# cursor: " << rep.cursor << " complete: " << (rep.complete ? 1 : 0)
       << " processed: " << rep.processed << " exceptional: " << rep.exceptional.size() << '\n';
    size_t next_exc = 0;
    // Rows ascending: witnesses and exceptional values interleave by m.
    auto wit_it = rep.witnesses.begin();
    while (next_exc < rep.exceptional.size() || wit_it != rep.witnesses.end()) {
        const bool take_exc =
            wit_it == rep.witnesses.end() ||
            (next_exc < rep.exceptional.size() && rep.exceptional[next_exc] < wit_it->first);
        if (take_exc) {
            os << rep.exceptional[next_exc] << "\texceptional\t-\n";
            ++next_exc;
        } else {
            const auto& [m, q] = *wit_it;
            os << m << "\twitness\t" << q.x << ',' << q.y << ',' << q.z << ',' << q.w << '\n';
            ++wit_it;
        }
    }
    if (!os) throw std::runtime_error("failed writing report file '" + path + "'");
}

void write_summary_json(const ScanReport& rep, const std::string& path) {
    nlohmann::json j;
    j["format"] = "sums4-scan-summary";
    j["version"] = 1;
    j["task"] = {{"spec", rep.task.spec.key()},
                 {"pretty", rep.task.spec.pretty()},
                 {"lo", rep.task.lo},
                 {"hi", rep.task.hi},
                 {"filter", rep.task.filter.key()},
                 {"signed", rep.task.signed_search},
                 {"witness_mode",
                  rep.task.witness_mode == WitnessMode::StoreFirstWitness ? "witness" : "existence"},
                 {"hash", hex16(rep.task.identity_hash())}};
    j["cursor"] = rep.cursor;
    j["complete"] = rep.complete;
    j["processed"] = rep.processed;
    j["exceptional"] = rep.exceptional;
    j["exceptional_count"] = rep.exceptional.size();
    j["witness_count"] = rep.witnesses.size();
    j["wall_ms"] = rep.wall_ms;
    j["per_m_us"] = rep.per_m_us;
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open summary file '" + path + "'");
    os << j.dump(2) << '\n';
    if (!os) throw std::runtime_error("failed writing summary file '" + path + "'");
}

std::optional<Checkpoint> load_checkpoint(const std::string& path) {
    std::ifstream is(path);
    if (!is) return std::nullopt;
    auto bad = [&](const char* why) {
        throw std::runtime_error("malformed checkpoint '" + path + "': " + why);
    };
    std::string header;
    if (!std::getline(is, header)) bad("empty file");
    if (header != "sums4 checkpoint v1") bad("unknown header");
    Checkpoint cp;
    std::string word;
    unsigned long long v = 0;
    if (!(is >> word) || word != "task") bad("missing task line");
    std::string hash_hex;
    if (!(is >> hash_hex) || hash_hex.size() != 16 ||
        hash_hex.find_first_not_of("0123456789abcdef") != std::string::npos)
        bad("bad task hash");
    cp.task_hash = std::stoull(hash_hex, nullptr, 16);
    if (!(is >> word) || word != "cursor") bad("missing cursor line");
    if (!(is >> v)) bad("bad cursor");
    cp.cursor = v;
    if (!(is >> word) || word != "exceptional") bad("missing exceptional line");
    unsigned long long count = 0;
    if (!(is >> count)) bad("bad exceptional count");
    cp.exceptional.reserve(count);
    for (unsigned long long i = 0; i < count; ++i) {
        if (!(is >> v)) bad("truncated exceptional list");
        cp.exceptional.push_back(v);
    }
    return cp;
}

void save_checkpoint(const Checkpoint& cp, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open checkpoint temp file '" + tmp + "'");
        os << "sums4 checkpoint v1\n";
        os << "task " << hex16(cp.task_hash) << '\n';
        os << "cursor " << cp.cursor << '\n';
        os << "exceptional " << cp.exceptional.size() << '\n';
        for (u64 e : cp.exceptional) os << e << '\n';
        os.flush();
        if (!os) throw std::runtime_error("failed writing checkpoint temp file '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("cannot move checkpoint into place: " + ec.message());
}

} // namespace sums4
