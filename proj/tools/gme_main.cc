// gme: command-line front door to the library.
//
// Exit codes: 0 success, 1 a verify suite or scenario check failed, 2 usage or input error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gme/errors.h"
#include "gme/harness.h"
#include "gme/invariant.h"
#include "gme/partition.h"
#include "gme/partition_vector.h"
#include "gme/seed_family.h"
#include "gme/signal.h"
#include "gme/state_factory.h"
#include "gme/state_io.h"

namespace {

using nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

#ifndef GME_DEFAULT_TABLE
#define GME_DEFAULT_TABLE ""
#endif

struct Common {
    bool json = false;
    bool bits = false;
};

double in_units(double nats, const Common& c) { return c.bits ? nats / std::log(2.0) : nats; }

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw gme::DomainError("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw gme::DomainError("'" + path + "' is not JSON: " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw gme::DomainError("cannot write '" + path + "'");
    }
    out << text;
}

/// Labels named in a partition string: comma-separated blocks give multi-character labels,
/// otherwise every character is a party.
gme::PartySetRef infer_parties(const std::vector<std::string>& texts) {
    std::vector<std::string> labels;
    for (const auto& text : texts) {
        std::stringstream blocks(text);
        std::string block;
        while (std::getline(blocks, block, '|')) {
            if (block.find(',') != std::string::npos) {
                std::stringstream items(block);
                std::string item;
                while (std::getline(items, item, ',')) {
                    labels.push_back(item);
                }
            } else {
                for (char ch : block) {
                    labels.emplace_back(1, ch);
                }
            }
        }
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return gme::make_party_set(labels);
}

gme::PartySetRef parties_for(std::optional<std::size_t> q, const std::vector<std::string>& texts) {
    return q ? gme::letter_parties(*q) : infer_parties(texts);
}

std::optional<gme::TupleTable> load_table(const std::string& path) {
    if (!path.empty()) {
        return gme::read_table_file(path);
    }
    if (std::string(GME_DEFAULT_TABLE).size() && std::filesystem::exists(GME_DEFAULT_TABLE)) {
        return gme::read_table_file(GME_DEFAULT_TABLE);
    }
    return std::nullopt;
}

gme::SeedFamily family_for(const std::string& text, const std::string& table_path) {
    if (text == "multi") {
        auto table = load_table(table_path);
        if (!table) {
            throw gme::DomainError("family 'multi' needs --table");
        }
        return gme::SeedFamily::log_multi_invariant(*table);
    }
    return gme::parse_family(text);
}

gme::SignalMode parse_mode(const std::string& text) {
    if (text == "signal") {
        return gme::SignalMode::Signal;
    }
    if (text == "pre-signal" || text == "presignal") {
        return gme::SignalMode::PreSignal;
    }
    throw gme::DomainError("mode must be 'signal' or 'pre-signal'");
}

std::vector<gme::Partition> constraints_from(const std::string& text, const gme::PartySetRef& ps) {
    if (text == "singletons") {
        return gme::singleton_cut_constraints(ps);
    }
    if (text == "all-proper") {
        return gme::proper_constraints(ps);
    }
    if (!text.empty() && text[0] == '@') {
        auto j = read_json_file(text.substr(1));
        const json& list = j.is_object() ? j.at("constraints") : j;
        std::vector<gme::Partition> out;
        for (const auto& p : list) {
            out.push_back(gme::Partition::parse(ps, p.get<std::string>()));
        }
        return out;
    }
    throw gme::DomainError("--constraints must be singletons, all-proper or @file.json");
}

std::string file_stem_for(const gme::SymmetricSignalSpec& spec, std::size_t index) {
    if (!spec.rho) {
        return "spec_" + std::to_string(index);
    }
    std::string s = "M_" + spec.rho->to_string();
    for (auto& ch : s) {
        if (ch == '|') {
            ch = '_';
        } else if (ch == ',') {
            ch = '-';
        }
    }
    return s;
}

int emit_report(const gme::Report& report, const Common& c) {
    if (c.json) {
        std::cout << gme::report_to_json(report).dump(2) << "\n";
    } else {
        std::cout << gme::report_to_text(report);
    }
    return report.pass() ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gme: GME signals from the partition lattice"};
    app.require_subcommand(1);
    // Subcommands inherit this, so --json and --bits work after the subcommand too.
    app.fallthrough();
    app.set_version_flag("--version", std::string(gme::kToolVersion));
    Common c;
    app.add_flag("--json", c.json, "Machine-readable output");
    app.add_flag("--bits", c.bits, "Report entropies and invariants in bits instead of nats");

    int exit_code = 0;

    // lattice ---------------------------------------------------------------------------
    auto* lattice = app.add_subcommand("lattice", "Partition lattice operations")->require_subcommand(1);
    std::size_t enum_q = 0;
    auto* l_enum = lattice->add_subcommand("enum", "Enumerate partitions of q letter parties");
    l_enum->add_option("--q", enum_q, "Party count")->required();
    l_enum->callback([&] {
        auto parts = gme::enumerate_partitions(gme::letter_parties(enum_q));
        if (c.json) {
            json j = {{"q", enum_q}, {"count", parts.size()}, {"partitions", json::array()}};
            for (const auto& p : parts) {
                j["partitions"].push_back(p.to_string());
            }
            std::cout << j.dump(2) << "\n";
        } else {
            for (const auto& p : parts) {
                std::cout << p.to_string() << "\n";
            }
        }
    });

    std::string kappa_text, pi_text, rho_text, constraints_text;
    std::optional<std::size_t> lattice_q;
    auto* l_mu = lattice->add_subcommand("mobius", "Möbius function mu(kappa, pi)");
    l_mu->add_option("--kappa", kappa_text)->required();
    l_mu->add_option("--pi", pi_text)->required();
    l_mu->add_option("--q", lattice_q, "Use letter parties A.. instead of inferring labels");
    l_mu->callback([&] {
        auto ps = parties_for(lattice_q, {kappa_text, pi_text});
        auto kappa = gme::Partition::parse(ps, kappa_text), pi = gme::Partition::parse(ps, pi_text);
        auto mu = gme::mobius(kappa, pi);
        if (c.json) {
            std::cout << json{{"kappa", kappa.to_string()}, {"pi", pi.to_string()}, {"mu", mu}}.dump(2) << "\n";
        } else {
            std::cout << mu << "\n";
        }
    });

    auto* l_mv = lattice->add_subcommand("mobius-vector", "M_rho = sum over pi <= rho of mu(pi, rho) pi");
    l_mv->add_option("--rho", rho_text)->required();
    l_mv->add_option("--q", lattice_q);
    l_mv->callback([&] {
        auto ps = parties_for(lattice_q, {rho_text});
        auto m = gme::mobius_vector(gme::Partition::parse(ps, rho_text));
        if (c.json) {
            json terms = json::array();
            for (const auto& [pi, coeff] : m.vector.terms()) {
                terms.push_back({{"coeff", gme::to_string(coeff)}, {"partition", pi.to_string()}});
            }
            std::cout << json{{"rho", m.rho.to_string()}, {"terms", terms}}.dump(2) << "\n";
        } else {
            std::cout << m.vector.to_string() << "\n";
        }
    });

    std::size_t solve_q = 0;
    auto* l_solve = lattice->add_subcommand("solve", "Basis of V with V meet kappa = 0 for all constraints");
    l_solve->add_option("--q", solve_q, "Party count")->required();
    l_solve->add_option("--constraints", constraints_text, "singletons | all-proper | @file.json")->required();
    l_solve->callback([&] {
        auto ps = gme::letter_parties(solve_q);
        auto basis = gme::solve_meet_vanishing(ps, constraints_from(constraints_text, ps));
        if (c.json) {
            json arr = json::array();
            for (const auto& m : basis) {
                arr.push_back({{"rho", m.rho.to_string()}, {"vector", m.vector.to_string()}});
            }
            std::cout << json{{"q", solve_q}, {"dimension", basis.size()}, {"basis", arr}}.dump(2) << "\n";
        } else {
            for (const auto& m : basis) {
                std::cout << "M_" << m.rho.to_string() << " = " << m.vector.to_string() << "\n";
            }
        }
    });

    // state -----------------------------------------------------------------------------
    auto* state = app.add_subcommand("state", "Build pure states")->require_subcommand(1);
    std::string catalog, out_path;
    std::size_t state_q = 0, state_d = 2;
    std::uint64_t state_seed = 1;
    auto* s_make = state->add_subcommand("make", "Catalog state (product, bell, ghz, w, appendixA-*)");
    s_make->add_option("--catalog", catalog)->required();
    s_make->add_option("--q", state_q)->required();
    s_make->add_option("--d", state_d);
    s_make->add_option("-o,--output", out_path);
    s_make->callback([&] {
        write_text(out_path, gme::state_to_json(gme::catalog_state(catalog, state_q, state_d)).dump(2) + "\n");
    });
    auto* s_random = state->add_subcommand("random", "Haar-random pure state");
    s_random->add_option("--q", state_q)->required();
    s_random->add_option("--d", state_d);
    s_random->add_option("--seed", state_seed);
    s_random->add_option("-o,--output", out_path);
    s_random->callback([&] {
        write_text(out_path, gme::state_to_json(gme::random_state(state_q, state_d, state_seed)).dump(2) + "\n");
    });

    // invariant -------------------------------------------------------------------------
    auto* invariant = app.add_subcommand("invariant", "LU invariants of a state file")->require_subcommand(1);
    std::string state_path, subset, tuple_path;
    unsigned renyi_n = 2;
    auto* i_renyi = invariant->add_subcommand("renyi", "Rényi entropy of a subset");
    i_renyi->add_option("--state", state_path)->required();
    i_renyi->add_option("--subset", subset)->required();
    i_renyi->add_option("--n", renyi_n, "Rényi order (1 = von Neumann)");
    i_renyi->callback([&] {
        auto psi = gme::read_state_file(state_path);
        double s = in_units(gme::renyi_entropy(psi, subset, renyi_n), c);
        if (c.json) {
            std::cout << json{{"subset", subset}, {"n", renyi_n}, {"unit", c.bits ? "bits" : "nats"}, {"value", s}}.dump(2)
                      << "\n";
        } else {
            std::cout.precision(17);
            std::cout << s << "\n";
        }
    });
    auto* i_z = invariant->add_subcommand("z", "Multi-invariant Z and, when positive, E = -(1/n) log Z");
    i_z->add_option("--state", state_path)->required();
    i_z->add_option("--tuple", tuple_path)->required();
    i_z->callback([&] {
        auto psi = gme::read_state_file(state_path);
        auto t = gme::tuple_from_json(read_json_file(tuple_path));
        auto z = gme::multi_invariant_Z(t, psi);
        std::optional<double> e;
        try {
            e = in_units(gme::log_of_Z(z, t.n()), c);
        } catch (const gme::PositivityError&) {
        }
        if (c.json) {
            json j = {{"n", t.n()}, {"Z", {z.real(), z.imag()}}, {"unit", c.bits ? "bits" : "nats"}};
            j["E"] = e ? json(*e) : json(nullptr);
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout.precision(17);
            std::cout << "Z = " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i\n";
            if (e) {
                std::cout << "E = " << *e << "\n";
            } else {
                std::cout << "E undefined (Z not positive real)\n";
            }
        }
    });

    // signal ----------------------------------------------------------------------------
    auto* signal = app.add_subcommand("signal", "Build, evaluate and expand signals")->require_subcommand(1);
    std::size_t signal_q = 0;
    std::string family_text = "renyi:2", mode_text = "signal", spec_path, table_path, out_dir;
    bool reduce_pure = false, subsets = false;
    auto* g_build = signal->add_subcommand("build", "Möbius-vector basis for a seed family");
    g_build->add_option("--q", signal_q)->required();
    g_build->add_option("--family", family_text, "renyi:N, vn, residual[:LABEL], square(...), exp(...), multi");
    g_build->add_option("--mode", mode_text, "signal | pre-signal");
    g_build->add_option("--table", table_path, "Tuple table for the multi family");
    g_build->add_option("-o,--output", out_dir, "Directory for one spec file per basis member");
    g_build->callback([&] {
        auto basis = gme::build_signal_basis(family_for(family_text, table_path), signal_q, parse_mode(mode_text));
        if (out_dir.empty()) {
            json arr = json::array();
            for (const auto& s : basis) {
                arr.push_back(gme::spec_to_json(s));
            }
            std::cout << arr.dump(2) << "\n";
            return;
        }
        std::filesystem::create_directories(out_dir);
        for (std::size_t i = 0; i < basis.size(); i++) {
            auto path = std::filesystem::path(out_dir) / (file_stem_for(basis[i], i) + ".json");
            write_text(path.string(), gme::spec_to_json(basis[i]).dump(2) + "\n");
            std::cout << path.string() << "\n";
        }
    });
    auto* g_eval = signal->add_subcommand("eval", "Evaluate a spec on a state");
    g_eval->add_option("--spec", spec_path)->required();
    g_eval->add_option("--state", state_path)->required();
    g_eval->add_option("--table", table_path);
    g_eval->callback([&] {
        auto spec = gme::spec_from_json(read_json_file(spec_path), load_table(table_path));
        double v = in_units(gme::evaluate(spec, gme::read_state_file(state_path)), c);
        if (c.json) {
            std::cout << json{{"value", v}, {"unit", c.bits ? "bits" : "nats"}}.dump(2) << "\n";
        } else {
            std::cout.precision(17);
            std::cout << v << "\n";
        }
    });
    auto* g_expand = signal->add_subcommand("expand", "Grouped symbolic expansion");
    g_expand->add_option("--spec", spec_path)->required();
    g_expand->add_option("--table", table_path);
    g_expand->add_flag("--reduce-pure", reduce_pure, "Apply pure-state reductions");
    g_expand->add_flag("--subsets", subsets, "Rényi-sum specs only: expand into subset entropies");
    g_expand->callback([&] {
        auto spec = gme::spec_from_json(read_json_file(spec_path), load_table(table_path));
        std::string text;
        if (subsets) {
            auto e = gme::subset_expansion(spec);
            text = reduce_pure ? e.reduce_pure(gme::SubsetExpansion::Fold::Display).render() : e.render();
        } else {
            text = gme::render_grouped(gme::expand_grouped(spec, reduce_pure));
        }
        if (c.json) {
            std::cout << json{{"expansion", text}, {"reduce_pure", reduce_pure}}.dump(2) << "\n";
        } else {
            std::cout << text << "\n";
        }
    });

    // verify ----------------------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "Run property suites ('all' for every suite)");
    std::vector<std::string> suite_names;
    gme::VerifyOptions vopts;
    bool serial = false, list_suites = false;
    verify->add_option("suites", suite_names, "Suite names or 'all'");
    verify->add_option("--q-max", vopts.q_max, "Largest party count for sweeping suites (2..6)");
    verify->add_option("--seed", vopts.seed);
    verify->add_flag("--serial", serial, "Run suites on the main thread");
    verify->add_flag("--list", list_suites, "List suites and exit");
    verify->callback([&] {
        if (list_suites) {
            for (const auto& s : gme::verify_suites()) {
                std::cout << s.name << "\t" << s.module << "\t" << s.property << "\n";
            }
            return;
        }
        vopts.parallel = !serial;
        exit_code = emit_report(gme::run_verify(suite_names, vopts), c);
    });

    // scenario --------------------------------------------------------------------------
    auto* scenario = app.add_subcommand("scenario", "Run a named scenario");
    std::string scenario_id;
    gme::ScenarioOptions sopts;
    bool list_scenarios = false;
    scenario->add_option("id", scenario_id, "Scenario id");
    scenario->add_option("--seed", sopts.seed);
    scenario->add_option("--q", sopts.q);
    scenario->add_option("--samples", sopts.samples);
    scenario->add_flag("--list", list_scenarios, "List scenario ids and exit");
    scenario->callback([&] {
        if (list_scenarios) {
            for (const auto& id : gme::scenario_ids()) {
                std::cout << id << "\n";
            }
            return;
        }
        if (scenario_id.empty()) {
            throw CLI::RequiredError("scenario id");
        }
        exit_code = emit_report(gme::run_scenario(scenario_id, sopts), c);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const gme::Error& e) {
        std::cerr << "gme: " << e.what() << "\n";
        return kExitUsage;
    } catch (const json::exception& e) {
        std::cerr << "gme: malformed JSON input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "gme: " << e.what() << "\n";
        return kExitUsage;
    }
    return exit_code;
}
