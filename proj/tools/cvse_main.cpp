// Command-line front end: run simulation studies, estimate on user data,
// inspect covariance components, print the permutation-ratio table.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvse/adhoc_variance.hpp"
#include "cvse/core.hpp"
#include "cvse/estimators.hpp"
#include "cvse/if_variance.hpp"
#include "cvse/resampling.hpp"
#include "cvse/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cvse::InvalidInput("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cvse::InvalidInput("cannot write file: " + path);
    out << content;
}

// Input dataset: UTF-8 CSV with a header row, a column named "label" holding
// 1 or 2, and the remaining columns as features.
cvse::TwoClassDataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cvse::InvalidInput("cannot open dataset: " + path);
    std::string line;
    if (!std::getline(in, line)) throw cvse::InvalidInput("dataset is empty: " + path);

    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char ch : s) {
            if (ch == ',') {
                out.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur.push_back(ch);
            }
        }
        out.push_back(cur);
        return out;
    };

    const auto header = split(line);
    int label_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        std::string h = header[c];
        for (char& ch : h) ch = static_cast<char>(std::tolower(ch));
        if (h == "label") label_col = static_cast<int>(c);
    }
    if (label_col < 0) throw cvse::InvalidInput("dataset needs a 'label' column");
    const int p = static_cast<int>(header.size()) - 1;
    if (p < 1) throw cvse::InvalidInput("dataset needs at least one feature column");

    std::vector<std::vector<double>> rows1, rows2;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw cvse::InvalidInput("dataset line " + std::to_string(line_no) +
                                     ": wrong column count");
        std::vector<double> feat;
        feat.reserve(p);
        int label = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            try {
                const double v = std::stod(cells[c]);
                if (static_cast<int>(c) == label_col)
                    label = static_cast<int>(v);
                else
                    feat.push_back(v);
            } catch (const std::exception&) {
                throw cvse::InvalidInput("dataset line " + std::to_string(line_no) +
                                         ": bad number '" + cells[c] + "'");
            }
        }
        if (label == 1)
            rows1.push_back(std::move(feat));
        else if (label == 2)
            rows2.push_back(std::move(feat));
        else
            throw cvse::InvalidInput("dataset line " + std::to_string(line_no) +
                                     ": label must be 1 or 2");
    }
    cvse::Matrix x1(static_cast<long>(rows1.size()), p), x2(static_cast<long>(rows2.size()), p);
    for (std::size_t r = 0; r < rows1.size(); ++r)
        for (int c = 0; c < p; ++c) x1(static_cast<long>(r), c) = rows1[r][c];
    for (std::size_t r = 0; r < rows2.size(); ++r)
        for (int c = 0; c < p; ++c) x2(static_cast<long>(r), c) = rows2[r][c];
    return cvse::TwoClassDataset(std::move(x1), std::move(x2));
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, int workers) {
    cvse::StudyConfig cfg =
        cvse::study_config_from_json(nlohmann::json::parse(read_file(config_path)));
    if (!cfg.has_seed)
        throw cvse::InvalidInput("simulate: the config must set a seed (no silent "
                                 "nondeterminism)");
    if (workers >= 0) cfg.workers = workers;
    cfg.validate();

    const cvse::StudyReport report = cvse::run_study(cfg);

    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/report.csv", cvse::report_csv(report));
    write_file(out_dir + "/trials.csv", cvse::trials_csv(report));
    write_file(out_dir + "/report.json", cvse::report_json(report).dump(2) + "\n");

    std::cout << "study cell: " << cvse::to_string(cfg.classifier.kind) << " p=" << cfg.p
              << " K=" << cfg.K << " n1=" << cfg.n1 << " n2=" << cfg.n2
              << " c=" << report.c_used << " n_mc=" << cfg.n_mc << "\n";
    for (const auto& p : report.points)
        std::cout << "  " << p.name << ": mean=" << p.mean << " trueSD=" << p.true_sd
                  << " (se " << p.se_mean << ", " << p.se_true_sd << ")\n";
    for (const auto& s : report.se_estimators)
        std::cout << "  " << s.name << ": mean=" << s.mean << " sd=" << s.sd
                  << " bias=" << s.bias << " rms=" << s.rms << " [normalized bias=" << s.norm_bias
                  << " sd=" << s.norm_sd << " rms=" << s.norm_rms << "]\n";
    if (report.trials_failed > 0)
        std::cout << "  trials failed: " << report.trials_failed << "\n";
    std::cout << "wrote " << out_dir << "/report.{csv,json} and trials.csv\n";
    return kExitOk;
}

int cmd_estimate(const std::string& data_path, const std::string& classifier,
                 const std::string& cv, int K, int M, int R, std::uint64_t seed, bool has_seed,
                 const std::string& pairing_name, const std::string& policy_name, double ridge,
                 const std::string& out_path, bool ragged) {
    const cvse::TwoClassDataset data = load_dataset_csv(data_path);
    cvse::ClassifierSpec spec;
    spec.kind = cvse::classifier_kind_from_string(classifier);
    spec.ridge = ridge;

    const cvse::Pairing pairing =
        pairing_name == "matched" ? cvse::Pairing::Matched : cvse::Pairing::Full;
    const cvse::DenPolicy policy =
        policy_name == "skip" ? cvse::DenPolicy::Skip : cvse::DenPolicy::Strict;
    if (pairing_name != "matched" && pairing_name != "full")
        throw cvse::InvalidInput("pairing must be full or matched");
    if (policy_name != "skip" && policy_name != "strict")
        throw cvse::InvalidInput("policy must be strict or skip");
    if (cv != "cvn" && !has_seed)
        throw cvse::InvalidInput("estimate: --seed is required for randomized CV modes");

    nlohmann::json out;
    out["schema_version"] = 1;
    out["input"] = data_path;
    out["n1"] = data.n1();
    out["n2"] = data.n2();
    out["p"] = data.p();
    out["classifier"] = classifier;
    out["cv"] = cv;

    if (cv == "cvn") {
        const cvse::CvAucResult res = cvse::auc_cvn(data, spec);
        const double sd =
            cvse::if_sd_cvn_reduction(res.per_obs_auc1, res.per_obs_auc2, res.auc);
        out["auc"] = res.auc;
        out["se"] = {{"sd_if", sd}};
        out["per_obs_auc1"] = res.per_obs_auc1;
        out["per_obs_auc2"] = res.per_obs_auc2;
        out["diagnostics"] = {{"ridge_activations", res.ridge_activations}};
        std::cout << "AUC(CVN) = " << res.auc << "\n  sd_if = " << sd << "\n";
    } else if (cv == "cvk") {
        const cvse::FoldPlan plan =
            cvse::plan_cvk(data.n1(), data.n2(), K, K, seed, ragged);
        const cvse::CvAucResult res = cvse::auc_cvk(data, spec, plan, pairing);
        out["auc"] = res.auc;
        out["seed"] = seed;
        out["K"] = K;
        nlohmann::json se;
        if (pairing == cvse::Pairing::Full) {
            se["sqrt_var1_cvk"] = std::sqrt(cvse::var1_cvk(res.per_fold_auc));
            se["sqrt_var3_cvk"] = std::sqrt(cvse::var3_cvk(res.per_fold_auc, res.auc));
        }
        if (!res.matched_auc.empty())
            se["sqrt_var2_cvk"] = std::sqrt(cvse::var2_cvk(res.matched_auc));
        out["se"] = se;
        out["diagnostics"] = {{"ridge_activations", res.ridge_activations}};
        std::cout << "AUC(CVK, " << pairing_name << ") = " << res.auc << "\n"
                  << se.dump(2) << "\n";
    } else if (cv == "cvkr") {
        const cvse::FoldPlan plan = cvse::plan_cvkr(data.n1(), data.n2(), K, R, seed, ragged);
        const cvse::CvAucResult res = cvse::auc_cvkr(data, spec, plan, pairing);
        out["auc"] = res.auc;
        out["seed"] = seed;
        out["K"] = K;
        out["R"] = R;
        nlohmann::json se;
        if (pairing == cvse::Pairing::Full) {
            se["sqrt_var1_cvk"] = std::sqrt(cvse::var1_cvk(res.per_rep_fold_auc.front()));
            se["sqrt_var2_cvk"] = std::sqrt(cvse::var2_cvk(res.per_rep_matched_auc.front()));
            se["sqrt_var3_cvk"] =
                std::sqrt(cvse::var3_cvk(res.per_rep_fold_auc.front(), res.per_rep_auc.front()));
            se["sqrt_var1_cvkr"] = std::sqrt(cvse::var1_cvkr(res.per_rep_fold_auc));
            se["sqrt_var2_cvkr"] = std::sqrt(cvse::var2_cvkr(res.per_rep_matched_auc));
            se["sqrt_var3_cvkr"] =
                std::sqrt(cvse::var3_cvkr(res.per_rep_fold_auc, res.per_rep_auc));
            const cvse::CvkrInfluencePartial part = cvse::if_cvkr_partial(res);
            se["sd_if_partial"] = {{"note", part.note},
                                   {"sd_term1_only", part.sd_term1_only},
                                   {"g0", part.g0},
                                   {"log_g0", part.log_g0}};
            out["per_obs_auc1"] = res.per_obs_auc1;
            out["per_obs_auc2"] = res.per_obs_auc2;
        } else {
            se["sqrt_var2_cvk"] = std::sqrt(cvse::var2_cvk(res.per_rep_matched_auc.front()));
            se["sqrt_var2_cvkr"] = std::sqrt(cvse::var2_cvkr(res.per_rep_matched_auc));
        }
        out["se"] = se;
        out["diagnostics"] = {{"ridge_activations", res.ridge_activations}};
        std::cout << "AUC(CVKR, " << pairing_name << ") = " << res.auc << "\n"
                  << se.dump(2) << "\n";
    } else if (cv == "cvkm") {
        const cvse::FoldPlan plan = cvse::plan_cvkm(data.n1(), data.n2(), K, M, seed, ragged);
        const cvse::CvAucResult res = cvse::auc_cvkm(data, spec, plan, policy);
        const cvse::InfluenceComponents inf = cvse::if_sd_cvkm(res, plan);
        out["auc"] = res.auc;
        out["seed"] = seed;
        out["K"] = K;
        out["M"] = M;
        out["se"] = {{"sd_if", inf.sd},
                     {"sd_if_term1_only", inf.sd_term1_only},
                     {"sqrt_var_cvkm", std::sqrt(cvse::var_cvkm(res.auc_11m, res.K1, res.K2))}};
        out["influence"] = cvse::influence_to_json(inf);
        double min_den = res.table.den.minCoeff();
        out["diagnostics"] = {{"ridge_activations", res.ridge_activations},
                              {"skipped_pairs", res.skipped_pairs},
                              {"min_pair_coverage", min_den},
                              {"expected_pair_coverage",
                               static_cast<double>(M) / (static_cast<double>(K) * K)}};
        std::cout << "AUC(CVKM) = " << res.auc << "\n  sd_if = " << inf.sd
                  << "  (term I only: " << inf.sd_term1_only << ")\n  sqrt_var_cvkm = "
                  << std::sqrt(cvse::var_cvkm(res.auc_11m, res.K1, res.K2))
                  << "\n  min pair coverage = " << min_den << "\n";
    } else {
        throw cvse::InvalidInput("cv must be one of cvn, cvk, cvkr, cvkm");
    }

    if (!out_path.empty()) write_file(out_path, out.dump(2) + "\n");
    return kExitOk;
}

int cmd_components(const std::string& config_path) {
    cvse::StudyConfig cfg =
        cvse::study_config_from_json(nlohmann::json::parse(read_file(config_path)));
    if (!cfg.has_seed) throw cvse::InvalidInput("components: the config must set a seed");
    cfg.validate();
    const cvse::ComponentsReport rep = cvse::estimate_components(cfg);
    std::cout << "covariance components of e_i over " << rep.trials_components << " of "
              << rep.trials << " trials (variance side uses the other " << rep.trials_variance
              << "; n=" << rep.n << ", n_K=" << rep.n_K << "):\n"
              << "  mu      = " << rep.comp.mu << "\n"
              << "  sigma^2 = " << rep.comp.sigma2 << "\n"
              << "  omega   = " << rep.comp.omega << "\n"
              << "  gamma   = " << rep.comp.gamma << "\n"
              << "variance of the K-fold error estimate:\n"
              << "  MC variance            = " << rep.mc_var_err << "\n"
              << "  decomposition (5a)     = " << rep.reconstruction
              << "  (match se " << rep.se_reconstruction_match << ")\n"
              << "naive variance estimator:\n"
              << "  mean naive value       = " << rep.mean_naive_var << "\n"
              << "  observed bias          = " << rep.observed_bias << "\n"
              << "  predicted bias (-gamma)= " << rep.predicted_bias << "  (match se "
              << rep.se_bias_match << ")\n";
    return kExitOk;
}

int cmd_ratio(int n_max, const std::string& out_path) {
    if (n_max < 2) throw cvse::InvalidInput("ratio: n-max must be >= 2");
    std::ostringstream csv;
    csv << "n,ratio\n";
    for (int n = 2; n <= n_max; n += 2) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", cvse::permutation_ratio(n));
        csv << n << ',' << buf << '\n';
    }
    if (out_path.empty())
        std::cout << csv.str();
    else
        write_file(out_path, csv.str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cvse: cross-validation AUC/error estimates with ad-hoc and "
                 "influence-function standard errors"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "run a Monte-Carlo study cell from a JSON config");
    std::string sim_config, sim_out = "out";
    int sim_workers = -1;
    sim->add_option("--config", sim_config, "JSON study config")->required();
    sim->add_option("--out", sim_out, "output directory");
    sim->add_option("--workers", sim_workers, "worker threads (0 = auto)");

    auto* est = app.add_subcommand("estimate", "estimate AUC/SE on a CSV dataset");
    std::string est_data, est_classifier = "lda", est_cv = "cvkm";
    std::string est_pairing = "full", est_policy = "strict", est_out;
    int est_k = 5, est_m = 1000, est_r = 100;
    std::uint64_t est_seed = 0;
    double est_ridge = 0.0;
    bool est_ragged = false;
    est->add_option("--data", est_data, "input CSV (header row, 'label' column with 1/2)")
        ->required();
    est->add_option("--classifier", est_classifier, "lda or qda");
    est->add_option("--cv", est_cv, "cvn, cvk, cvkr or cvkm");
    est->add_option("--k", est_k, "fold count K");
    est->add_option("--m", est_m, "CVKM repetitions");
    est->add_option("--r", est_r, "CVKR repetitions");
    auto* seed_opt = est->add_option("--seed", est_seed, "RNG seed (required unless cvn)");
    est->add_option("--pairing", est_pairing, "full or matched");
    est->add_option("--policy", est_policy, "strict or skip (CVKM zero-denominator pairs)");
    est->add_option("--ridge", est_ridge, "covariance ridge");
    est->add_option("--out", est_out, "write the JSON report here");
    est->add_flag("--ragged", est_ragged, "allow fold counts that do not divide n");

    auto* comp = app.add_subcommand("components", "estimate sigma^2/omega/gamma of CV errors");
    std::string comp_config;
    comp->add_option("--config", comp_config, "JSON study config")->required();

    auto* ratio = app.add_subcommand("ratio", "permutation-count ratio C(n, n/2) / n^n");
    int ratio_max = 40;
    std::string ratio_out;
    ratio->add_option("--n-max", ratio_max, "largest (even) n");
    ratio->add_option("--out", ratio_out, "write CSV here instead of stdout");

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return cmd_simulate(sim_config, sim_out, sim_workers);
        if (est->parsed())
            return cmd_estimate(est_data, est_classifier, est_cv, est_k, est_m, est_r, est_seed,
                                seed_opt->count() > 0, est_pairing, est_policy, est_ridge,
                                est_out, est_ragged);
        if (comp->parsed()) return cmd_components(comp_config);
        if (ratio->parsed()) return cmd_ratio(ratio_max, ratio_out);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    } catch (const cvse::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const cvse::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const cvse::CoverageError& e) {
        std::cerr << "coverage failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
