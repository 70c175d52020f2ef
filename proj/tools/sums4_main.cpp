#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sums4/arith.hpp"
#include "sums4/constraints.hpp"
#include "sums4/construct.hpp"
#include "sums4/represent.hpp"
#include "sums4/survey.hpp"

using namespace sums4;

namespace {

// Shared --form/--named/--target/--abs option block.
struct SpecOpts {
    std::string form;
    std::string named;
    std::string target = "sq";
    bool absolute = false;
};

void add_spec_opts(CLI::App* cmd, SpecOpts& so) {
    cmd->add_option("--form", so.form,
                    "linear form \"a,b,c,d\" or quadratic \"quad:p,q,r\" in x,y");
    cmd->add_option("--named", so.named, "named predicate id, e.g. \"C4.6:d=1\" (excludes --form)");
    cmd->add_option("--target", so.target,
                    "target set: sq sq+ pow2 pow2+ pow4 pow4+ pow2even pow2odd")
        ->capture_default_str();
    cmd->add_flag("--abs", so.absolute, "test |value| against the target set");
}

ConstraintSpec build_spec(const SpecOpts& so) {
    if (!so.named.empty()) {
        if (!so.form.empty())
            throw std::invalid_argument("--named cannot be combined with --form");
        return named_spec(so.named);
    }
    if (so.form.empty()) throw std::invalid_argument("need --form or --named");
    return parse_spec(so.form, so.target, so.absolute);
}

// "odd" | "squares" | "form4b1" | "all" | "mod<M>:<r,...>"
DomainFilter parse_filter(const std::string& text, u64 greater_than) {
    DomainFilter f;
    f.greater_than = greater_than;
    if (text.empty() || text == "all") return f;
    if (text == "odd") {
        f.modulus = 2;
        f.allowed = {1};
        return f;
    }
    if (text == "squares") {
        f.squares_only = true;
        return f;
    }
    if (text == "form4b1") {
        f.pow4_form_only = true;
        return f;
    }
    if (text.rfind("mod", 0) == 0) {
        const auto colon = text.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("bad filter '" + text + "'");
        f.modulus = std::stoull(text.substr(3, colon - 3));
        if (f.modulus == 0) throw std::invalid_argument("filter modulus must be positive");
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) f.allowed.push_back(std::stoull(item));
        if (f.allowed.empty()) throw std::invalid_argument("filter needs at least one residue");
        return f;
    }
    throw std::invalid_argument("unknown filter '" + text + "'");
}

// "q:k,q:k,...[;finite:a,b,...]"
ExceptionalFamily parse_family(const std::string& text) {
    ExceptionalFamily fam;
    std::string geo = text, fin;
    if (const auto semi = text.find(';'); semi != std::string::npos) {
        geo = text.substr(0, semi);
        fin = text.substr(semi + 1);
        if (fin.rfind("finite:", 0) != 0)
            throw std::invalid_argument("expected \";finite:...\" in family '" + text + "'");
        fin = fin.substr(7);
    }
    std::stringstream gs(geo);
    std::string item;
    while (std::getline(gs, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("bad family member '" + item + "' (want q:k)");
        fam.geometric.emplace_back(std::stoull(item.substr(0, colon)),
                                   unsigned(std::stoul(item.substr(colon + 1))));
    }
    std::stringstream fs(fin);
    while (std::getline(fs, item, ','))
        if (!item.empty()) fam.finite.push_back(std::stoull(item));
    return fam;
}

// Relative checkpoint names land in $SUMS4_CHECKPOINT_DIR when it is set.
std::string resolve_checkpoint(const std::string& path) {
    if (path.empty()) return path;
    const char* dir = std::getenv("SUMS4_CHECKPOINT_DIR");
    if (!dir || !*dir || std::filesystem::path(path).is_absolute()) return path;
    return (std::filesystem::path(dir) / path).string();
}

void print_signed_witness(const SignedDecomposition& q) {
    std::cout << "witness " << q.x << ',' << q.y << ',' << q.z << ',' << q.w << '\n';
}

void print_value_of(const ConstraintSpec& spec, i64 x, i64 y, i64 z, i64 w) {
    if (const auto* lf = spec.linear())
        std::cout << "value " << i64(lf->value(x, y, z, w)) << '\n';
    else if (const auto* qf = std::get_if<QuadFormXY>(&spec.form))
        std::cout << "value " << i64(qf->value(x, y)) << '\n';
}

int cmd_decompose(u64 m, const SpecOpts& so, bool use_signed) {
    const ConstraintSpec spec = build_spec(so);
    if (use_signed) {
        const auto r = find_constrained_signed(m, spec);
        if (!r) {
            std::cout << "NONE\n";
            return 1;
        }
        print_signed_witness(*r);
        print_value_of(spec, r->x, r->y, r->z, r->w);
    } else {
        const auto r = find_constrained(m, spec);
        if (!r) {
            std::cout << "NONE\n";
            return 1;
        }
        std::cout << "witness " << r->x << ',' << r->y << ',' << r->z << ',' << r->w << '\n';
        print_value_of(spec, i64(r->x), i64(r->y), i64(r->z), i64(r->w));
    }
    return 0;
}

int cmd_construct(u64 m, const std::string& theorem, int lambda, bool trace) {
    if (theorem == "1.1") {
        const auto res = theorem11_decompose(m, lambda);
        if (trace)
            for (const auto& line : res.trace) std::cout << "# " << line << '\n';
        std::cout << "witness " << res.witness.x << ',' << res.witness.y << ',' << res.witness.z
                  << ',' << res.witness.w << '\n';
        std::cout << "value " << res.value << '\n';
        return 0;
    }
    if (theorem == "1.2") {
        const auto res = theorem12_decompose(m);
        if (trace)
            for (const auto& line : res.trace) std::cout << "# " << line << '\n';
        print_signed_witness(res.witness);
        std::cout << "value " << (u64(1) << (2 * res.exponent)) << " (4^" << res.exponent
                  << ")\n";
        return 0;
    }
    throw std::invalid_argument("--theorem must be 1.1 or 1.2");
}

struct ScanCli {
    u64 lo = 1, hi = 0;
    SpecOpts so;
    std::string filter;
    u64 greater_than = 0;
    bool use_signed = false;
    bool witnesses = false;
    int jobs = 1;
    std::string checkpoint;
    u64 stride = u64(1) << 16;
    u64 stop_after = 0;
    std::string report_path;
    std::string summary_path;
};

int cmd_scan(const ScanCli& sc) {
    ScanTask t;
    t.spec = build_spec(sc.so);
    t.lo = sc.lo;
    t.hi = sc.hi;
    t.filter = parse_filter(sc.filter, sc.greater_than);
    t.signed_search = sc.use_signed;
    t.witness_mode = sc.witnesses ? WitnessMode::StoreFirstWitness : WitnessMode::ExistenceOnly;

    ScanOptions opts;
    opts.jobs = sc.jobs;
    opts.checkpoint_path = resolve_checkpoint(sc.checkpoint);
    opts.checkpoint_stride = sc.stride;
    opts.stop_after = sc.stop_after;

    const ScanReport rep = run_scan(t, opts);
    std::cout << "task " << t.canonical() << '\n';
    std::cout << "cursor " << rep.cursor << (rep.complete ? " complete" : " partial")
              << " processed " << rep.processed << " wall_ms " << rep.wall_ms << '\n';
    std::cout << "exceptional " << rep.exceptional.size() << '\n';
    for (u64 e : rep.exceptional) std::cout << e << '\n';
    if (!sc.report_path.empty()) write_report_text(rep, sc.report_path);
    if (!sc.summary_path.empty()) write_summary_json(rep, sc.summary_path);
    return 0;
}

int cmd_exceptional(u64 bound, const SpecOpts& so, const std::string& family,
                    const std::string& out_path) {
    const auto exc = exceptional_set(build_spec(so), bound);
    std::ostringstream body;
    for (u64 e : exc) body << e << '\n';
    if (!out_path.empty()) {
        std::ofstream os(out_path, std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open '" + out_path + "'");
        os << body.str();
    }
    std::cout << "exceptional " << exc.size() << '\n' << body.str();
    if (family.empty()) return 0;
    const auto want = parse_family(family).members_up_to(bound);
    if (exc == want) {
        std::cout << "family MATCH\n";
        return 0;
    }
    std::cout << "family MISMATCH (expected " << want.size() << " members)\n";
    return 1;
}

int cmd_verify(const std::string& name, u64 bound, int jobs, const std::string& checkpoint,
               const std::string& report_path) {
    ScanOptions opts;
    opts.jobs = jobs;
    opts.checkpoint_path = resolve_checkpoint(checkpoint);
    const VerifyOutcome out = verify_conjecture(name, bound, opts);

    std::string rp = report_path;
    if (rp.empty()) {
        std::string slug = name;
        for (char& c : slug)
            if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
        rp = "sums4-verify-" + slug + "-" + std::to_string(bound) + ".txt";
    }
    for (size_t i = 0; i < out.reports.size(); ++i) {
        std::string path = rp;
        if (out.reports.size() > 1) path += "." + std::to_string(i);
        write_report_text(out.reports[i], path);
    }

    if (out.pass) {
        std::cout << "PASS " << name << " bound " << bound << " (exceptional "
                  << out.observed.size() << ")\n";
        return 0;
    }
    std::cout << "FAIL " << name << " bound " << bound;
    if (!out.failing_label.empty()) std::cout << " check " << out.failing_label;
    if (out.first_counterexample) std::cout << " first mismatch " << *out.first_counterexample;
    std::cout << "\nobserved " << out.observed.size() << " expected " << out.expected.size()
              << '\n';
    return 1;
}

int cmd_selftest() {
    int bad = 0;
    auto check = [&bad](bool ok, const char* what) {
        std::cout << (ok ? "ok " : "FAIL ") << what << '\n';
        if (!ok) ++bad;
    };

    check(isqrt(152399025ull) == 12345 && isqrt(152399024ull) == 12344 &&
              is_square(16384).has_value(),
          "integer square roots");
    check(in_E(7) && in_E(112) && !in_E(3) && !in_E(0), "exceptional-core membership");

    const auto t3 = three_square_decompose(14);
    check(t3 && t3->a == 3 && t3->b == 2 && t3->c == 1, "three-square decomposition");

    const auto spec = parse_spec("1,2,2,0", "sq+", false);
    const auto r = find_constrained(5, spec);
    check(r && r->x == 0 && r->y == 0 && r->z == 2 && r->w == 1, "constrained first witness");

    const EulerWeights W{1, 2, 2, 0};
    const auto stuv = euler_compose(W, SignedDecomposition{2, 1, -3, 1});
    const auto back = back_solve(W, stuv);
    check(back && back->x == 2 && back->y == 1 && back->z == -3 && back->w == 1,
          "compose/solve round trip");

    const auto t11 = theorem11_decompose(13, 3);
    check(t11.witness.norm() == 13 && is_square(t11.value).has_value(), "constructive route (1.1)");

    const auto t12 = theorem12_decompose(16);
    check(t12.witness.norm() == 16 && t12.exponent >= 1, "constructive route (1.2)");

    const auto exc = exceptional_set(parse_spec("1,2,2,0", "sq+", false), 300);
    check(exc == std::vector<u64>{7, 24, 55, 112, 120, 255}, "range scan exceptional set");

    std::cout << (bad == 0 ? "selftest PASS\n" : "selftest FAIL\n");
    return bad == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"four-square decompositions under linear and quadratic constraints"};
    app.require_subcommand(1);
    int rc = 0;

    // decompose
    auto* dec = app.add_subcommand("decompose", "first constrained decomposition of m");
    u64 dec_m = 0;
    SpecOpts dec_so;
    bool dec_signed = false;
    dec->add_option("m", dec_m, "value to decompose")->required();
    add_spec_opts(dec, dec_so);
    dec->add_flag("--signed", dec_signed, "search signed quadruples (w >= 0)");
    dec->callback([&] { rc = cmd_decompose(dec_m, dec_so, dec_signed); });

    // construct
    auto* con = app.add_subcommand("construct", "decomposition via the constructive routes");
    u64 con_m = 0;
    std::string con_theorem = "1.1";
    int con_lambda = 2;
    bool con_trace = false;
    con->add_option("m", con_m, "value to decompose")->required();
    con->add_option("--theorem", con_theorem,
                    "route: 1.1 (x+2y+lambda*z a positive square) or 1.2 (x+2y+3z = 4^a)")
        ->capture_default_str();
    con->add_option("--lambda", con_lambda, "2 or 3 (route 1.1 only)")->capture_default_str();
    con->add_flag("--trace", con_trace, "print the intermediate steps");
    con->callback([&] { rc = cmd_construct(con_m, con_theorem, con_lambda, con_trace); });

    // scan
    auto* scn = app.add_subcommand("scan", "exceptional set of a range");
    ScanCli sc;
    scn->add_option("--lo", sc.lo, "range start")->capture_default_str();
    scn->add_option("--hi", sc.hi, "range end (inclusive)")->required();
    add_spec_opts(scn, sc.so);
    scn->add_option("--filter", sc.filter, "domain: all odd squares form4b1 mod<M>:<r,...>");
    scn->add_option("--greater-than", sc.greater_than, "skip m <= this");
    scn->add_flag("--signed", sc.use_signed, "search signed quadruples");
    scn->add_flag("--witnesses", sc.witnesses, "store first witnesses (report rows)");
    scn->add_option("--jobs", sc.jobs, "worker threads")->capture_default_str();
    scn->add_option("--checkpoint", sc.checkpoint, "checkpoint file (resume if present)");
    scn->add_option("--stride", sc.stride, "processed values between checkpoint writes");
    scn->add_option("--stop-after", sc.stop_after, "pause after N processed values (serial)");
    scn->add_option("--report", sc.report_path, "write a text report here");
    scn->add_option("--summary", sc.summary_path, "write a JSON summary here");
    scn->callback([&] { rc = cmd_scan(sc); });

    // exceptional
    auto* exc = app.add_subcommand("exceptional", "exceptional set up to a bound");
    u64 exc_bound = 0;
    SpecOpts exc_so;
    std::string exc_family, exc_out;
    exc->add_option("--bound", exc_bound, "scan 1..bound")->required();
    add_spec_opts(exc, exc_so);
    exc->add_option("--family", exc_family, "compare against \"q:k,...[;finite:a,...]\"");
    exc->add_option("--out", exc_out, "also write the values here");
    exc->callback([&] { rc = cmd_exceptional(exc_bound, exc_so, exc_family, exc_out); });

    // verify
    auto* ver = app.add_subcommand("verify", "check a registered conjecture up to a bound");
    std::string ver_name;
    u64 ver_bound = 0;
    int ver_jobs = 1;
    std::string ver_checkpoint, ver_report;
    bool ver_list = false;
    ver->add_option("name", ver_name, "registry name, e.g. C1.1-weak");
    ver->add_option("--bound", ver_bound, "scan 1..bound");
    ver->add_option("--jobs", ver_jobs, "worker threads")->capture_default_str();
    ver->add_option("--checkpoint", ver_checkpoint, "checkpoint file prefix");
    ver->add_option("--report", ver_report, "text report path (default derived from name)");
    ver->add_flag("--list", ver_list, "list the registry and exit");
    ver->callback([&] {
        if (ver_list) {
            for (const auto& e : conjecture_registry())
                std::cout << e.name << "\t" << e.statement << '\n';
            rc = 0;
            return;
        }
        if (ver_name.empty() || ver_bound == 0)
            throw std::invalid_argument("verify needs a name and --bound (or --list)");
        rc = cmd_verify(ver_name, ver_bound, ver_jobs, ver_checkpoint, ver_report);
    });

    // selftest
    auto* st = app.add_subcommand("selftest", "quick internal cross-checks");
    st->callback([&] { rc = cmd_selftest(); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return rc;
}
