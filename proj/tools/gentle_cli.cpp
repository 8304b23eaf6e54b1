// Command-line front end: validation, threads, the derived invariant,
// elementary transformations, normal forms, classification, reduction,
// and the desk-scale enumeration/verification harness.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gentle/canonical.hpp"
#include "gentle/enumeration.hpp"
#include "gentle/invariant.hpp"
#include "gentle/normal_forms.hpp"
#include "gentle/presentation.hpp"
#include "gentle/reduction.hpp"
#include "gentle/threads.hpp"
#include "gentle/transforms.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitDomain = 65;
constexpr int kExitNoInput = 66;

struct file_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

gentle::Presentation load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw file_error("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return gentle::parse_quiver(buf.str());
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw file_error("cannot write '" + path + "'");
    out << content;
}

int cmd_validate(const std::string& file, bool json) {
    gentle::Presentation p = load_file(file);
    gentle::ValidationReport rep = gentle::validate_gentle(p);
    if (json) {
        nlohmann::ordered_json j;
        j["ok"] = rep.ok;
        j["violations"] = nlohmann::ordered_json::array();
        for (const auto& v : rep.violations)
            j["violations"].push_back({{"condition", v.condition}, {"site", v.site}});
        std::cout << j.dump(2) << "\n";
    } else if (rep.ok) {
        std::cout << "ok: connected gentle presentation with " << p.vertices.size()
                  << " vertices, " << p.arrows.size() << " arrows, c(Q) = " << cycle_number(p)
                  << "\n";
    } else {
        for (const auto& v : rep.violations)
            std::cout << "violation of condition " << v.condition << ": " << v.site << "\n";
    }
    return rep.ok ? 0 : kExitDomain;
}

int cmd_threads(const std::string& file, bool json) {
    gentle::Presentation p = load_file(file);
    gentle::ValidationReport rep = gentle::validate_gentle(p);
    if (!rep.ok) throw gentle::domain_error("input is not a valid gentle presentation");
    gentle::SignAssignment sa = gentle::assign_signs(p);
    gentle::ThreadSystem ts = gentle::compute_threads(p, sa);
    if (json) {
        nlohmann::ordered_json j = gentle::threads_json(ts);
        gentle::PartitionEncoding enc = gentle::partition_encoding(p);
        j["lambda"] = enc.lambda;
        j["gamma"] = enc.gamma;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    auto show = [&](const gentle::Thread& t) {
        std::ostringstream line;
        if (t.trivial()) line << "trivial at " << t.anchor;
        else {
            for (size_t i = 0; i < t.arrows.size(); ++i) line << (i ? " " : "") << t.arrows[i];
        }
        line << "  (" << t.start << " -> " << t.end << ", sigma " << (t.sigma > 0 ? "+" : "-")
             << ", eps " << (t.eps > 0 ? "+" : "-") << ")";
        return line.str();
    };
    std::cout << "permitted threads (" << ts.permitted.size() << "):\n";
    for (const auto& t : ts.permitted) std::cout << "  " << show(t) << "\n";
    std::cout << "forbidden threads (" << ts.forbidden.size() << "):\n";
    for (const auto& t : ts.forbidden) std::cout << "  " << show(t) << "\n";
    if (!ts.cycles.empty()) {
        std::cout << "full-relation cycles (" << ts.cycles.size() << "):\n";
        for (const auto& c : ts.cycles) {
            std::cout << " ";
            for (const auto& a : c) std::cout << " " << a;
            std::cout << "\n";
        }
    }
    std::cout << "thread array:\n" << gentle::render_thread_array(gentle::thread_array(p, sa));
    gentle::PartitionEncoding enc = gentle::partition_encoding(p);
    std::cout << "lambda = (";
    for (size_t i = 0; i < enc.lambda.size(); ++i) std::cout << (i ? "," : "") << enc.lambda[i];
    std::cout << ")\ngamma  = {";
    for (size_t i = 0; i < enc.gamma.size(); ++i)
        std::cout << (i ? "," : "") << "{" << enc.gamma[i].first << "," << enc.gamma[i].second << "}";
    std::cout << "}\n";
    return 0;
}

int cmd_phi(const std::string& file, bool json, bool gap) {
    gentle::Presentation p = load_file(file);
    if (!gentle::validate_gentle(p).ok)
        throw gentle::domain_error("input is not a valid gentle presentation");
    gentle::PhiInvariant phi = gentle::compute_phi(p);
    if (json) {
        nlohmann::ordered_json j;
        j["phi"] = phi.pairs;
        j["cardinality"] = gentle::phi_cardinality(phi);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (gap ? gentle::to_gap_string(phi) : gentle::to_string(phi)) << "\n";
    }
    return 0;
}

// step arguments: V v | V- v | F a | F- a | L a | L- a | m tok after tok | m tok before tok
int cmd_transform(const std::string& file, const std::vector<std::string>& stepArgs,
                  const std::string& outPath, bool json) {
    gentle::Presentation cur = load_file(file);
    if (!gentle::validate_gentle(cur).ok)
        throw gentle::domain_error("input is not a valid gentle presentation");
    std::optional<gentle::ThreadArray> arr;
    size_t i = 0;
    while (i < stepArgs.size()) {
        const std::string& head = stepArgs[i];
        if (head == "m" || head == "m-") {
            if (i + 3 > stepArgs.size())
                throw gentle::domain_error("move syntax: m <v>+ after <w>- (or: before)");
            gentle::Token tok = gentle::parse_token(stepArgs[i + 1]);
            const std::string& dir = stepArgs[i + 2];
            if (dir != "after" && dir != "before")
                throw gentle::domain_error("move syntax: m <v>+ after|before <w>+-");
            if (i + 4 > stepArgs.size()) throw gentle::domain_error("move target missing");
            gentle::Token target = gentle::parse_token(stepArgs[i + 3]);
            gentle::MoveSpec mv{tok, dir == "before"};
            if (!arr) arr = gentle::thread_array(cur);
            // the stated target must match the move's own target
            gentle::ThreadArray before = *arr;
            arr = gentle::move_thread(*arr, mv);
            // derive the actual landing neighbour and verify
            bool found = false;
            for (const auto& col : arr->columns)
                for (size_t r = 0; r < col.size(); ++r)
                    if (col[r] == tok) {
                        size_t at = mv.inverse ? r + 1 : r - 1;
                        if (at < col.size() && col[at] == target) found = true;
                    }
            if (!found) {
                throw gentle::domain_error("move " + gentle::to_string(mv) + " does not land " +
                                           (mv.inverse ? "before " : "after ") +
                                           gentle::to_string(target));
            }
            i += 4;
            continue;
        }
        if (i + 2 > stepArgs.size()) throw gentle::domain_error("step syntax: <kind> <site>");
        gentle::TransformStep s = gentle::parse_step(head + " " + stepArgs[i + 1]);
        if (arr) {
            cur = gentle::decode_thread_array(*arr);
            arr.reset();
        }
        if (!gentle::step_applicable(cur, s))
            throw gentle::domain_error("step " + gentle::to_string(s) + " is not applicable");
        cur = gentle::apply_step(cur, s);
        i += 2;
    }
    if (arr) cur = gentle::decode_thread_array(*arr);
    if (json) {
        std::cout << gentle::to_json(cur).dump(2) << "\n";
        return 0;
    }
    write_output(outPath, gentle::to_dsl(cur));
    return 0;
}

int cmd_normal_form(const std::string& phiSpec, int family, const std::vector<std::string>& params,
                    const std::string& outPath, bool json) {
    gentle::InvariantTriple t{};
    if (!phiSpec.empty()) {
        t = gentle::parse_triple(phiSpec);
    } else {
        std::map<std::string, int> kv;
        for (const std::string& kvArg : params) {
            auto eq = kvArg.find('=');
            if (eq == std::string::npos)
                throw gentle::domain_error("parameter syntax: name=value");
            kv[kvArg.substr(0, eq)] = std::stoi(kvArg.substr(eq + 1));
        }
        auto v = [&](const std::string& k, int dflt = 0) {
            return kv.count(k) ? kv.at(k) : dflt;
        };
        int a = v("a", 1), b = v("b", 1), k = v("k"), q = v("q"), r = v("r");
        switch (family) {
            case 1: t = gentle::InvariantTriple::of({0, a}, {0, b}, {a + b - 2, 0}); break;
            case 2: t = gentle::InvariantTriple::of({a, 0}, {b, 0}, {0, a + b + 2}); break;
            case 3: t = gentle::InvariantTriple::of({1, 1}, {b, 0}, {0, b + 2}); break;
            case 4: t = gentle::InvariantTriple::of({1, 1}, {1, 1}, {0, 2}); break;
            case 5: t = gentle::InvariantTriple::of({1, 1}, {0, 1}, {0, 1}); break;
            case 6: t = gentle::InvariantTriple::of({k, a + k}, {q, b + q}, {a + b - 2 + r, r}); break;
            case 7: t = gentle::InvariantTriple::of({a + k, k}, {b + q, q}, {r, a + b + 2 + r}); break;
            case 8: t = gentle::InvariantTriple::of({k, k}, {b + q, q}, {r, b + 2 + r}); break;
            case 9: t = gentle::InvariantTriple::of({k, k}, {q, q}, {r, r + 2}); break;
            case 10: t = gentle::InvariantTriple::of({k, k}, {q, q + 1}, {r, r + 1}); break;
            default:
                throw gentle::domain_error("family must lie in 1..10");
        }
    }
    gentle::FamilyMatch fm = gentle::family_of(t);
    gentle::Presentation p = gentle::build_normal_form(t);
    if (json) {
        nlohmann::ordered_json j;
        j["family"] = fm.family;
        j["params"] = fm.params;
        j["phi"] = gentle::to_string(gentle::phi_of_triple(t));
        j["presentation"] = gentle::to_json(p);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::ostringstream head;
    head << "# normal form, family " << fm.family << ", phi = "
         << gentle::to_string(gentle::phi_of_triple(t)) << "\n";
    write_output(outPath, head.str() + gentle::to_dsl(p));
    return 0;
}

int cmd_classify(const std::string& fileA, const std::string& fileB, bool json) {
    gentle::Presentation a = load_file(fileA), b = load_file(fileB);
    gentle::Decision d = gentle::decide_derived_equivalence(a, b);
    const char* verdict = d.verdict == gentle::Verdict::equivalent ? "derived equivalent"
                          : d.verdict == gentle::Verdict::not_equivalent ? "not derived equivalent"
                                                                          : "out of scope";
    if (json) {
        nlohmann::ordered_json j;
        j["verdict"] = verdict;
        j["reason"] = d.reason;
        j["phi_a"] = gentle::to_string(d.phi_a);
        j["phi_b"] = gentle::to_string(d.phi_b);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << verdict << "\n";
        std::cout << "phi(A) = " << gentle::to_string(d.phi_a) << "\n";
        std::cout << "phi(B) = " << gentle::to_string(d.phi_b) << "\n";
        std::cout << d.reason << "\n";
    }
    switch (d.verdict) {
        case gentle::Verdict::equivalent: return 0;
        case gentle::Verdict::not_equivalent: return 1;
        case gentle::Verdict::out_of_scope: return 2;
    }
    return 2;
}

nlohmann::ordered_json trace_json(const gentle::ReductionTrace& trace) {
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const gentle::TraceStep& s : trace.steps) {
        if (std::holds_alternative<gentle::TransformStep>(s)) {
            steps.push_back({{"step", gentle::to_string(std::get<gentle::TransformStep>(s))}});
        } else {
            nlohmann::ordered_json moves = nlohmann::ordered_json::array();
            for (const gentle::MoveSpec& m : std::get<gentle::MoveGroup>(s).moves)
                moves.push_back(gentle::to_string(m));
            steps.push_back({{"moves", moves}});
        }
    }
    nlohmann::ordered_json j;
    j["complete"] = trace.complete;
    j["steps"] = steps;
    j["expansions"] = trace.expansions;
    if (!trace.note.empty()) j["note"] = trace.note;
    j["final"] = gentle::to_json(trace.final);
    return j;
}

int cmd_reduce(const std::string& file, long budget, const std::string& tracePath, bool json) {
    gentle::Presentation p = load_file(file);
    gentle::ReductionTrace trace = gentle::reduce_to_normal_form(p, budget);
    if (!tracePath.empty()) {
        std::ofstream out(tracePath);
        if (!out) throw file_error("cannot write '" + tracePath + "'");
        out << trace_json(trace).dump(2) << "\n";
    }
    if (json) {
        std::cout << trace_json(trace).dump(2) << "\n";
    } else if (trace.complete) {
        std::cout << "reduced in " << trace.steps.size() << " steps\n";
        for (const gentle::TraceStep& s : trace.steps)
            std::cout << "  " << gentle::to_string(s) << "\n";
        auto fm = gentle::is_normal_form(trace.final);
        if (fm) std::cout << "normal form family " << fm->family << "\n";
        std::cout << gentle::to_dsl(trace.final);
    } else {
        std::cout << "reduction incomplete: " << trace.note << "\n";
    }
    return trace.complete ? 0 : 1;
}

int cmd_enumerate(int n, int c, bool verify, const std::string& outPath, int threads, bool json) {
    gentle::EnumerationOptions opts;
    opts.threads = threads;
    opts.max_n = std::max(n, 5);
    if (verify && c == 2) {
        gentle::EnumerationReport rep = gentle::verify_theorems(n, opts);
        std::string payload = gentle::report_json(rep).dump(2) + "\n";
        if (json || !outPath.empty()) write_output(outPath, payload);
        if (!json && outPath.empty()) {
            std::cout << rep.presentation_count << " presentations, " << rep.orbit_count
                      << " orbits\n";
            for (const auto& col : rep.collisions)
                std::cout << "collision: " << gentle::to_string(col.phi) << " on "
                          << col.orbit_ids.size() << " orbits\n";
            std::cout << (rep.ok() ? "all checks passed" : "violations found!") << "\n";
        }
        return rep.ok() ? 0 : 1;
    }
    std::vector<gentle::Presentation> all = gentle::enumerate_gentle(n, c, opts);
    if (json) {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const auto& p : all) j.push_back(gentle::to_json(p));
        write_output(outPath, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "# " << all.size() << " presentations with n = " << n << ", c = " << c << "\n";
        for (size_t i = 0; i < all.size(); ++i) {
            out << "# --- " << (i + 1) << " (phi = ";
            try {
                out << gentle::to_string(gentle::compute_phi(all[i]));
            } catch (const gentle::domain_error&) {
                out << "n/a";
            }
            out << ")\n" << gentle::to_dsl(all[i]);
        }
        write_output(outPath, out.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"combinatorial derived-equivalence toolkit for gentle presentations"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "machine-readable output");

    std::string file, fileB, outPath, tracePath, phiSpec;
    std::vector<std::string> stepArgs, paramArgs;
    int n = 4, c = 2, family = 0, threads = 1;
    long budget = 100000;
    bool verify = false, gap = false;

    auto* vcmd = app.add_subcommand("validate", "check the gentleness conditions");
    vcmd->add_option("file", file)->required();

    auto* tcmd = app.add_subcommand("threads", "permitted/forbidden threads and encodings");
    tcmd->add_option("file", file)->required();

    auto* pcmd = app.add_subcommand("phi", "derived invariant");
    pcmd->add_option("file", file)->required();
    pcmd->add_flag("--gap", gap, "print in GAP list style");

    auto* xcmd = app.add_subcommand("transform", "apply elementary transformations");
    xcmd->add_option("file", file)->required();
    xcmd->add_option("steps", stepArgs, "e.g. V v1 F- a2 m v1+ after w2-")->required();
    xcmd->add_option("--out", outPath);

    auto* ncmd = app.add_subcommand("normal-form", "build a representative presentation");
    ncmd->add_option("--phi", phiSpec, "(a1,a2),(b1,b2),(c1,c2)");
    ncmd->add_option("--family", family, "family id 1..10");
    ncmd->add_option("--params", paramArgs, "a=2 b=1 k=0 q=0 r=0");
    ncmd->add_option("--out", outPath);

    auto* ccmd = app.add_subcommand("classify", "derived-equivalence verdict for two files");
    ccmd->add_option("fileA", file)->required();
    ccmd->add_option("fileB", fileB)->required();

    auto* rcmd = app.add_subcommand("reduce", "reduce to the normal form by transformations");
    rcmd->add_option("file", file)->required();
    rcmd->add_option("--budget", budget);
    rcmd->add_option("--trace", tracePath);

    auto* ecmd = app.add_subcommand("enumerate", "enumerate gentle presentations up to isomorphism");
    ecmd->add_option("-n", n)->required();
    ecmd->add_option("-c", c);
    ecmd->add_flag("--verify", verify);
    ecmd->add_option("--out", outPath);
    ecmd->add_option("--threads", threads);

    auto* ycmd = app.add_subcommand("verify", "reproduce the desk-scale theorem checks");
    ycmd->add_option("-n", n)->required();
    ycmd->add_option("--out", outPath);
    ycmd->add_option("--threads", threads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (vcmd->parsed()) return cmd_validate(file, json);
        if (tcmd->parsed()) return cmd_threads(file, json);
        if (pcmd->parsed()) return cmd_phi(file, json, gap);
        if (xcmd->parsed()) return cmd_transform(file, stepArgs, outPath, json);
        if (ncmd->parsed()) return cmd_normal_form(phiSpec, family, paramArgs, outPath, json);
        if (ccmd->parsed()) return cmd_classify(file, fileB, json);
        if (rcmd->parsed()) return cmd_reduce(file, budget, tracePath, json);
        if (ecmd->parsed()) return cmd_enumerate(n, c, verify, outPath, threads, json);
        if (ycmd->parsed()) return cmd_enumerate(n, 2, true, outPath, threads, json);
    } catch (const file_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoInput;
    } catch (const gentle::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const gentle::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
    return kExitUsage;
}
