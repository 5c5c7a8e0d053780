// Command-line driver: parameter scans, PMD dumps, HQA runs and self-checks.

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "ccsfa/ccsfa.hpp"

namespace {

struct Flags {
    std::map<std::string, std::string> kv;
    std::string config;
};

void add_common(CLI::App* cmd, Flags& f) {
    for (const char* key : {"kappa", "Z", "E0", "omega", "gamma", "variants", "out", "threads"})
        cmd->add_option_function<std::string>(std::string("--") + key,
                                              [&f, key](const std::string& v) { f.kv[key] = v; });
    cmd->add_option("--config", f.config, "key=value file; flags override it");
}

void warn_validity(const ccsfa::ScanSpec& spec) {
    std::set<std::string> seen;
    try {
        const auto [atom, pulse] = ccsfa::single_point(spec);
        for (const auto& w : ccsfa::derive(atom, pulse).validity.warnings)
            if (seen.insert(w).second) std::cerr << "warning: " << w << '\n';
    } catch (const ccsfa::error&) {
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coulomb-corrected strong-field ionization in one dimension"};
    app.require_subcommand(1);
    Flags flags;

    auto* field = app.add_subcommand("scan-field", "Coulomb shift and peak probability vs f = E0/E_a");
    add_common(field, flags);
    field->add_option_function<std::string>("--f-range", [&](const std::string& v) { flags.kv["f-range"] = v; },
                                            "a:b:n[:log]");
    field->add_flag_function("--hqa", [&](std::int64_t) { flags.kv["hqa"] = "1"; }, "add HQA columns");

    auto* gamma = app.add_subcommand("scan-gamma", "Coulomb shift and peak probability vs the Keldysh parameter");
    add_common(gamma, flags);
    gamma->add_option_function<std::string>("--gamma-range", [&](const std::string& v) { flags.kv["gamma-range"] = v; },
                                            "a:b:n[:log]");
    gamma->add_flag_function("--hqa", [&](std::int64_t) { flags.kv["hqa"] = "1"; }, "add HQA columns");

    auto* pmd = app.add_subcommand("pmd", "momentum distribution at one field setting");
    add_common(pmd, flags);
    pmd->add_option_function<std::string>("--p-range", [&](const std::string& v) { flags.kv["p-range"] = v; },
                                          "a:b:n, default p0 +- 3 Delta");

    auto* hqa = app.add_subcommand("hqa", "most probable complex trajectory vs f");
    add_common(hqa, flags);
    hqa->add_option_function<std::string>("--f-range", [&](const std::string& v) { flags.kv["f-range"] = v; },
                                          "a:b:n[:log]");

    auto* check = app.add_subcommand("check", "run the oracle comparisons");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (check->parsed()) {
        const auto rows = ccsfa::run_check();
        ccsfa::print_check(rows, std::cout);
        for (const auto& r : rows)
            if (!r.pass) return 2;
        return 0;
    }

    ccsfa::ScanSpec spec;
    try {
        std::map<std::string, std::string> kv;
        if (!flags.config.empty()) {
            std::ifstream in(flags.config);
            if (!in) throw ccsfa::spec_error("cannot read config '" + flags.config + "'");
            kv = ccsfa::read_config(in);
        }
        for (const auto& [k, v] : flags.kv) kv[k] = v;
        if (field->parsed()) spec.kind = ccsfa::ScanKind::field;
        else if (gamma->parsed()) spec.kind = ccsfa::ScanKind::gamma;
        else if (pmd->parsed()) spec.kind = ccsfa::ScanKind::pmd;
        else spec.kind = ccsfa::ScanKind::hqa;
        ccsfa::apply_config(spec, kv);
        if (spec.out.empty()) spec.out = std::string("ccsfa_") + ccsfa::to_string(spec.kind) + ".csv";
        spec.validate();
    } catch (const ccsfa::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (spec.kind == ccsfa::ScanKind::pmd) warn_validity(spec);
        ccsfa::Table t;
        switch (spec.kind) {
            case ccsfa::ScanKind::pmd: t = ccsfa::pmd_table(spec); break;
            case ccsfa::ScanKind::hqa: t = ccsfa::hqa_table(spec); break;
            default: t = ccsfa::scan_table(spec); break;
        }
        ccsfa::write_outputs(t, spec.out, ccsfa::to_string(spec.kind));
        std::cerr << "wrote " << spec.out << " (" << t.rows.size() << " rows) and " << spec.out << ".gp\n";
    } catch (const ccsfa::spec_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
