// chenprime: command-line front end.
//
// Exit codes: 0 ok, 1 an asserted check failed, 2 configuration error,
// 3 resource limit.

#include <cstdio>
#include <new>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chenprime/arith.hpp"
#include "chenprime/circle.hpp"
#include "chenprime/fourier.hpp"
#include "chenprime/goldbach.hpp"
#include "chenprime/report.hpp"
#include "chenprime/rosser.hpp"
#include "chenprime/selberg.hpp"
#include "chenprime/transference.hpp"

namespace cp = chenprime;
using cp::json;
using cp::u64;

namespace {

struct Common {
    u64 seed = 20240601;
    unsigned threads = 1;
    std::string profile = "desk";
    std::string format = "json";
    std::string out;
};

struct Output {
    json config = json::object();
    json result = json::object();
    std::vector<cp::Check> checks;
    std::string csv;
    std::string summary;
};

void emit(const std::string& command, const Common& c, Output& o) {
    std::string text;
    if (c.format == "csv") {
        text = o.csv;
    } else {
        text = cp::make_envelope(command, c.profile, o.config, o.result, o.checks).dump(2) + "\n";
    }
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(c.out);
        if (!f) throw cp::ConfigError("cannot open output file " + c.out);
        f << text;
    }
    if (!o.summary.empty()) std::cerr << o.summary;
}

int exit_code(const Output& o) {
    for (const auto& ch : o.checks) {
        if (ch.asserted && !ch.holds) return 1;
    }
    return 0;
}

cp::ChenVariant parse_variant(const std::string& v, double z) {
    if (v == "basic") return cp::ChenVariant::basic();
    if (v == "strict") return cp::ChenVariant::strict(z);
    throw cp::ConfigError("unknown variant '" + v + "' (expected basic or strict)");
}

cp::RosserSign parse_sign(const std::string& s) {
    if (s == "+" || s == "plus") return cp::RosserSign::plus;
    if (s == "-" || s == "minus") return cp::RosserSign::minus;
    throw cp::ConfigError("unknown sign '" + s + "' (expected plus or minus)");
}

std::vector<cp::WeightMode> parse_modes(const std::string& m) {
    if (m == "moebius") return {cp::WeightMode::moebius};
    if (m == "rosser_plus") return {cp::WeightMode::rosser_plus};
    if (m == "rosser_minus") return {cp::WeightMode::rosser_minus};
    if (m == "all") return {cp::WeightMode::moebius, cp::WeightMode::rosser_plus, cp::WeightMode::rosser_minus};
    throw cp::ConfigError("unknown mode '" + m + "'");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sieve weights, exponential sums and Z_N transference at desk scale"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML/INI file with option values");
    Common common;
    app.add_option("--seed", common.seed, "Seed for every sampled quantity")->capture_default_str();
    app.add_option("--threads", common.threads, "Worker cap")->capture_default_str();
    app.add_option("--profile", common.profile, "paper or desk")->check(CLI::IsMember({"paper", "desk"}))->capture_default_str();
    app.add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--out", common.out, "Write the report here instead of stdout");

    // chen
    u64 chen_bound = 0;
    std::string chen_variant = "basic";
    double chen_z = 2.0;
    auto* chen = app.add_subcommand("chen", "List Chen primes up to a bound");
    chen->add_option("--bound", chen_bound)->required();
    chen->add_option("--variant", chen_variant)->capture_default_str();
    chen->add_option("--z", chen_z, "Sieving level for the strict variant")->capture_default_str();

    // rosser
    double ros_D = 10.0;
    std::string ros_sign = "plus";
    auto* rosser = app.add_subcommand("rosser", "Support of the Rosser weights");
    rosser->add_option("--D", ros_D)->required();
    rosser->add_option("--sign", ros_sign)->capture_default_str();

    // arcs
    u64 arcs_n = 0;
    double arcs_B = cp::desk_defaults::B, arcs_maxQ = 1e5;
    std::vector<double> arcs_alpha;
    auto* arcs = app.add_subcommand("arcs", "Classify alphas into major and minor arcs");
    arcs->add_option("--n", arcs_n)->required();
    arcs->add_option("--B", arcs_B)->capture_default_str();
    arcs->add_option("--max-Q", arcs_maxQ)->capture_default_str();
    arcs->add_option("--alpha", arcs_alpha)->required();

    // ssum
    u64 ss_n = 0, ss_W = 6, ss_b = 5;
    unsigned ss_k0 = cp::desk_defaults::k0;
    std::optional<double> ss_z0, ss_D;
    std::vector<double> ss_alpha;
    std::string ss_mode = "all";
    std::size_t ss_spm = 0, ss_contrast = 0;
    double ss_B = cp::desk_defaults::B;
    auto* ssum = app.add_subcommand("ssum", "Sifted exponential sums S(alpha), S+(alpha), S-(alpha)");
    ssum->add_option("--n", ss_n)->required();
    ssum->add_option("--W", ss_W)->capture_default_str();
    ssum->add_option("--b", ss_b)->capture_default_str();
    ssum->add_option("--k0", ss_k0)->capture_default_str();
    ssum->add_option("--z0", ss_z0);
    ssum->add_option("--D", ss_D);
    ssum->add_option("--alpha", ss_alpha);
    ssum->add_option("--mode", ss_mode)->capture_default_str();
    ssum->add_option("--spm-samples", ss_spm, "Random alphas for the S+/S/S- comparison")->capture_default_str();
    ssum->add_option("--contrast-samples", ss_contrast, "Minor-arc samples for the contrast report")->capture_default_str();
    ssum->add_option("--B", ss_B)->capture_default_str();

    // selberg
    u64 sel_n = 100000, sel_W = 2, sel_b = 1;
    std::vector<u64> sel_M{1};
    unsigned sel_k0 = 10;
    std::optional<double> sel_z0, sel_z1;
    auto* selberg = app.add_subcommand("selberg", "Selberg weights and the pair-count bound");
    selberg->add_option("--n", sel_n)->capture_default_str();
    selberg->add_option("--W", sel_W)->capture_default_str();
    selberg->add_option("--b", sel_b)->capture_default_str();
    selberg->add_option("--M", sel_M)->capture_default_str();
    selberg->add_option("--k0", sel_k0)->capture_default_str();
    selberg->add_option("--z0", sel_z0);
    selberg->add_option("--z1", sel_z1);

    // transfer
    u64 tr_n = 0;
    cp::LedgerInputs tr_in;
    auto* transfer = app.add_subcommand("transfer", "Run the Z_N transference pipeline");
    transfer->add_option("--n", tr_n)->required();
    transfer->add_option("--kappa", tr_in.kappa);
    transfer->add_option("--delta", tr_in.delta);
    transfer->add_option("--epsilon", tr_in.epsilon);
    transfer->add_option("--k0", tr_in.k0);
    transfer->add_option("--B", tr_in.B);
    transfer->add_option("--C1", tr_in.C1)->capture_default_str();
    transfer->add_option("--C2", tr_in.C2)->capture_default_str();
    transfer->add_option("--C3", tr_in.C3)->capture_default_str();
    transfer->add_option("--C4", tr_in.C4)->capture_default_str();
    transfer->add_option("--C5", tr_in.C5)->capture_default_str();

    // goldbach
    u64 gb_lo = 9, gb_hi = 1000;
    std::string gb_variant = "basic";
    double gb_z = 2.0;
    auto* goldbach = app.add_subcommand("goldbach", "Survey n = p1 + p2 + p3 with p1, p2 Chen primes");
    goldbach->add_option("--lo", gb_lo)->capture_default_str();
    goldbach->add_option("--hi", gb_hi)->capture_default_str();
    goldbach->add_option("--variant", gb_variant)->capture_default_str();
    goldbach->add_option("--z", gb_z)->capture_default_str();

    // pollard
    u64 po_min = 11, po_max = 31, po_trials = 200;
    auto* pollard = app.add_subcommand("pollard", "Exhaustive Pollard-type sumset check on random instances");
    pollard->add_option("--nmin", po_min)->capture_default_str();
    pollard->add_option("--nmax", po_max)->capture_default_str();
    pollard->add_option("--trials", po_trials)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Output o;
        o.config = {{"seed", common.seed}, {"threads", common.threads}, {"format", common.format},
                    {"budget_max_entries", cp::Budget::from_env().max_entries}};
        std::ostringstream csv, sum;
        std::string command;

        if (chen->parsed()) {
            command = "chen";
            const auto variant = parse_variant(chen_variant, chen_z);
            o.config.update({{"bound", chen_bound}, {"variant", variant.describe()}});
            json rows = json::array();
            csv << "p,omega_p_plus_2\n";
            if (chen_bound >= 2) {
                const cp::FactorTable table(1, chen_bound + 2);
                for (u64 p : cp::chen_primes(chen_bound, variant, table)) {
                    rows.push_back(p);
                    csv << p << ',' << table.omega_big(p + 2) << '\n';
                }
            }
            o.result = {{"count", rows.size()}, {"primes", rows}};
            sum << "chen: " << rows.size() << " primes up to " << chen_bound << " (" << variant.describe() << ")\n";
        } else if (rosser->parsed()) {
            command = "rosser";
            const auto sign = parse_sign(ros_sign);
            const cp::PrimeSet ps(std::max<u64>(cp::strict_floor(ros_D), 2));
            const auto w = cp::build_rosser(ros_D, sign, ps);
            o.config.update({{"D", ros_D}, {"sign", cp::to_string(sign)}});
            json rows = json::array();
            csv << "d,k,value\n";
            for (const auto& e : w.entries()) {
                rows.push_back({{"d", e.d}, {"k", e.k()}, {"value", e.value}});
                csv << e.d << ',' << e.k() << ',' << e.value << '\n';
            }
            o.result = {{"support_size", w.size()}, {"support", rows}};
            sum << "rosser: support of size " << w.size() << " for D = " << ros_D << '\n';
        } else if (arcs->parsed()) {
            command = "arcs";
            const cp::ArcDissection arc(arcs_n, arcs_B, arcs_maxQ);
            o.config.update({{"n", arcs_n}, {"B", arcs_B}, {"max_Q", arcs_maxQ}});
            json rows = json::array();
            csv << "alpha,class,a,q\n";
            for (double a : arcs_alpha) {
                const auto c = arc.classify(a);
                if (c) {
                    rows.push_back({{"alpha", a}, {"class", "major"}, {"a", c->a}, {"q", c->q}});
                    csv << fmt(a) << ",major," << c->a << ',' << c->q << '\n';
                } else {
                    rows.push_back({{"alpha", a}, {"class", "minor"}});
                    csv << fmt(a) << ",minor,,\n";
                }
            }
            o.result = {{"Q", arc.Q()}, {"radius", arc.radius()}, {"rationals", arc.rationals().size()}, {"alphas", rows}};
            sum << "arcs: Q = " << arc.Q() << ", " << arc.rationals().size() << " centers\n";
        } else if (ssum->parsed()) {
            command = "ssum";
            const auto ctx = cp::SieveContext::make(ss_n, ss_W, ss_b, ss_k0, ss_z0, ss_D);
            const auto sums = cp::ExpSum::build(ctx, cp::Budget::from_env(), common.threads);
            o.config.update({{"n", ctx.n}, {"W", ctx.W}, {"b", ctx.b}, {"k0", ctx.k0}, {"z0", ctx.z0}, {"D", ctx.D},
                             {"mode", ss_mode}, {"spm_samples", ss_spm}, {"contrast_samples", ss_contrast}, {"B", ss_B}});
            json rows = json::array();
            csv << "alpha,re,im,mode\n";
            for (double a : ss_alpha) {
                for (auto m : parse_modes(ss_mode)) {
                    const auto r = sums.evaluate(a, m);
                    rows.push_back({{"alpha", a}, {"re", r.value.real()}, {"im", r.value.imag()}, {"mode", cp::to_string(m)},
                                    {"terms", r.term_count}});
                    csv << fmt(a) << ',' << fmt(r.value.real()) << ',' << fmt(r.value.imag()) << ',' << cp::to_string(m) << '\n';
                }
            }
            o.result["sums"] = rows;
            if (ss_spm > 0) {
                std::mt19937_64 rng(common.seed);
                std::vector<double> alphas{0.0, 0.5};
                std::uniform_real_distribution<double> u(0.0, 1.0);
                for (std::size_t i = 0; i < ss_spm; ++i) alphas.push_back(u(rng));
                const auto spm = cp::spm_comparison(sums, alphas);
                o.result["spm"] = {{"upper_bound", spm.upper_bound}, {"lower_bound", spm.lower_bound},
                                   {"min_slack", spm.min_slack}, {"alphas", alphas.size()}};
                o.checks.push_back({"spm_comparison", spm.min_slack, 0.0, spm.all_ok, true});
            }
            if (ss_contrast > 0) {
                const cp::ArcDissection arc(ctx.n, ss_B);
                const auto c = cp::minor_major_contrast(sums, arc, ss_contrast, common.seed);
                o.result["contrast"] = {{"Q", arc.Q()},
                                        {"median_minor", c.median_minor},
                                        {"median_major", c.median_major},
                                        {"median_major_nonzero_model", c.median_major_nonzero_model},
                                        {"max_minor", c.max_minor}};
                o.checks.push_back({"median_minor_lt_median_major", c.median_minor, c.median_major,
                                    c.median_minor < c.median_major, false});
            }
            sum << "ssum: " << sums.terms().size() << " primes in the progression\n";
        } else if (selberg->parsed()) {
            command = "selberg";
            const double nd = static_cast<double>(sel_n);
            const double z0 = sel_z0.value_or(std::pow(nd, 1.0 / sel_k0));
            const double z1 = sel_z1.value_or(std::pow(nd, 0.1));
            o.config.update({{"n", sel_n}, {"W", sel_W}, {"b", sel_b}, {"M", sel_M}, {"k0", sel_k0}, {"z0", z0}, {"z1", z1}});
            json rows = json::array();
            csv << "M,exact_count,sieve_sum,sieve_bound,ratio\n";
            for (u64 M : sel_M) {
                const auto s1 = cp::build_selberg(1, M, sel_W, sel_n, sel_k0, z0, z1);
                const auto s2 = cp::build_selberg(2, M, sel_W, sel_n, sel_k0, z0, z1);
                const auto q1 = cp::selberg_quadratic_form(s1);
                const auto q2 = cp::selberg_quadratic_form(s2);
                const auto pc = cp::pair_count_bound(sel_n, sel_W, sel_b, M, z0, z1);
                const double ratio = pc.exact_count > 0 ? pc.sieve_bound / static_cast<double>(pc.exact_count) : 0.0;
                rows.push_back({{"M", M},
                                {"stage1", {{"support", s1.support.size()}, {"G", s1.G}, {"max_abs_lambda", s1.max_abs_lambda()},
                                            {"quadratic_form_rel_err", q1.rel_err}, {"obstructed", s1.obstructed}}},
                                {"stage2", {{"support", s2.support.size()}, {"G", s2.G}, {"max_abs_lambda", s2.max_abs_lambda()},
                                            {"quadratic_form_rel_err", q2.rel_err}}},
                                {"exact_count", pc.exact_count},
                                {"small_pairs", pc.small_pairs},
                                {"sieve_sum", pc.sieve_sum},
                                {"sieve_bound", pc.sieve_bound},
                                {"bound_over_exact", ratio}});
                csv << M << ',' << pc.exact_count << ',' << fmt(pc.sieve_sum) << ',' << fmt(pc.sieve_bound) << ',' << fmt(ratio) << '\n';
                const std::string tag = "M=" + std::to_string(M);
                o.checks.push_back({tag + " exact<=bound", static_cast<double>(pc.exact_count), pc.sieve_bound, pc.ok, true});
                o.checks.push_back({tag + " max|lambda|<=1", std::max(s1.max_abs_lambda(), s2.max_abs_lambda()), 1.0,
                                    std::max(s1.max_abs_lambda(), s2.max_abs_lambda()) <= 1.0 + 1e-10, true});
                o.checks.push_back({tag + " quadratic_form=1/G", std::max(q1.rel_err, q2.rel_err), 1e-8,
                                    std::max(q1.rel_err, q2.rel_err) <= 1e-8, true});
            }
            o.result["rows"] = rows;
            sum << "selberg: " << sel_M.size() << " shifts evaluated\n";
        } else if (transfer->parsed()) {
            command = "transfer";
            const auto profile = cp::parse_profile(common.profile);
            o.config.update({{"n", tr_n}});
            const auto rep = cp::run_transference(tr_n, profile, tr_in, common.threads);
            o.result = cp::to_json(rep);
            o.checks = rep.checks;
            csv << "name,value,bound,holds,status\n";
            for (const auto& c : rep.checks) {
                csv << c.name << ',' << fmt(c.value) << ',' << fmt(c.bound) << ',' << (c.holds ? "true" : "false") << ','
                    << (c.asserted ? "asserted" : "diagnostic") << '\n';
            }
            std::size_t held = 0;
            for (const auto& c : rep.checks) held += c.holds ? 1 : 0;
            sum << "transfer: N = " << rep.ledger.N << ", raw triple sum " << rep.raw_triple << ", " << held << "/"
                << rep.checks.size() << " checks hold, asserted " << (rep.asserted_ok() ? "ok" : "FAILED") << '\n';
        } else if (goldbach->parsed()) {
            command = "goldbach";
            const auto variant = parse_variant(gb_variant, gb_z);
            o.config.update({{"lo", gb_lo}, {"hi", gb_hi}, {"variant", variant.describe()}});
            const auto rep = cp::range_survey(gb_lo, gb_hi, variant, common.threads);
            csv << "n,rep_count,min_k_p3,has_all_chen\n";
            for (const auto& r : rep.rows) {
                csv << r.n << ',' << r.rep_count << ',' << r.min_k_p3 << ',' << (r.has_all_chen ? "true" : "false") << '\n';
            }
            json hist = json::object();
            for (const auto& [k, c] : rep.min_k_histogram) hist[std::to_string(k)] = c;
            o.result = {{"numbers", rep.rows.size()}, {"failures", rep.failures}, {"failure_count", rep.failures.size()},
                        {"min_k_histogram", hist}, {"max_min_k", rep.max_min_k}};
            o.checks.push_back({"no_failures", static_cast<double>(rep.failures.size()), 0.0, rep.failures.empty(), false});
            sum << "goldbach: " << rep.rows.size() << " values of n, failures=" << rep.failures.size() << '\n';
        } else if (pollard->parsed()) {
            command = "pollard";
            o.config.update({{"nmin", po_min}, {"nmax", po_max}, {"trials", po_trials}});
            const auto sw = cp::pollard_sweep(po_min, po_max, po_trials, common.seed);
            o.result = {{"moduli", sw.moduli}, {"instances", sw.instances}, {"checks", sw.checks},
                        {"failures", sw.failures}, {"min_count_over_bound", sw.min_ratio}};
            o.checks.push_back({"pollard_bound", static_cast<double>(sw.failures), 0.0, sw.failures == 0, true});
            csv << "instances,checks,failures,min_count_over_bound\n"
                << sw.instances << ',' << sw.checks << ',' << sw.failures << ',' << fmt(sw.min_ratio) << '\n';
            sum << "pollard: " << sw.instances << " instances, " << sw.failures << " failures\n";
        }
        o.csv = csv.str();
        o.summary = sum.str();
        emit(command, common, o);
        return exit_code(o);
    } catch (const std::bad_alloc&) {
        std::cerr << "resource error: allocation failed\n";
        return 3;
    } catch (const cp::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return 3;
    } catch (const cp::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    }
}
