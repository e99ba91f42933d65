// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>

#include <unistd.h>

#include "spoofdet/eval.hpp"
#include "spoofdet/gmm.hpp"
#include "spoofdet/manifest.hpp"
#include "spoofdet/parallel.hpp"
#include "spoofdet/select.hpp"
#include "spoofdet/svg.hpp"
#include "spoofdet/tuning.hpp"
#include "spoofdet/wav.hpp"

#include <json.hpp>

namespace fs = std::filesystem;

namespace spoofdet {

namespace {

void log_line(const ExperimentConfig& config, const std::string& message) {
    std::cerr << "[spoofdet] " << message << std::endl;
    std::ofstream log(fs::path(config.out_dir) / "run.log", std::ios::app);
    if (log) log << message << '\n';
}

// one process owns a run directory at a time
class RunLock {
public:
    explicit RunLock(const std::string& out_dir)
        : path_(fs::path(out_dir) / ".lock") {
        fs::create_directories(out_dir);
        std::FILE* f = std::fopen(path_.c_str(), "wx");
        if (!f)
            throw Error(ErrorCode::LockHeld,
                        "run directory is locked: " + path_.string() +
                            " (stale lock? remove it)");
        std::fprintf(f, "%ld\n", static_cast<long>(::getpid()));
        std::fclose(f);
    }
    ~RunLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    RunLock(const RunLock&) = delete;
    RunLock& operator=(const RunLock&) = delete;

private:
    fs::path path_;
};

void write_marker(const fs::path& path, const std::string& hash) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << hash << '\n';
}

bool marker_matches(const fs::path& path, const std::string& hash) {
    std::ifstream in(path);
    if (!in) return false;
    std::string stored;
    std::getline(in, stored);
    return stored == hash;
}

void write_effective_config(const ExperimentConfig& config) {
    fs::create_directories(config.out_dir);
    write_text_file((fs::path(config.out_dir) / "config.json").string(),
                    config.effective_json());
}

void require_hash(const std::string& found, const std::string& expected,
                  const std::string& what) {
    if (found != expected)
        throw Error(ErrorCode::SchemaMismatch,
                    what + " was produced under config " + found +
                        " but this run expects " + expected +
                        "; refusing to mix artifacts");
}

FeatureTable load_features_checked(const ExperimentConfig& config) {
    const std::string path =
        (fs::path(config.out_dir) / "features.csv").string();
    std::string comment;
    FeatureTable table = read_feature_csv(path, &comment);
    require_hash(comment, config.extract_hash(), path);
    return table;
}

struct Pipeline {
    FeatureTable cleaned;
    CleanReport clean_report;
    AnovaReport anova;
    std::vector<std::string> kept;
    Preprocessor pre;
};

Pipeline build_pipeline(const ExperimentConfig& config,
                        const FeatureTable& raw) {
    Pipeline p;
    p.cleaned = clean(raw, &p.clean_report);
    p.anova = select_features(p.cleaned, config.alpha);
    p.kept = p.anova.kept_names();
    p.pre = Preprocessor::fit(p.cleaned, p.kept);
    return p;
}

SvmConfig svm_config_from(const ExperimentConfig& config, bool rbf, double c,
                          GammaSpec gamma) {
    SvmConfig sc;
    sc.rbf = rbf;
    sc.c = c;
    sc.gamma = gamma;
    sc.tolerance = config.svm_tolerance;
    sc.max_pair_updates = config.svm_max_pair_updates;
    sc.cache_mb = config.kernel_cache_mb;
    return sc;
}

TrainedModel train_one(const ExperimentConfig& config, const std::string& name,
                       const LabeledMatrix& train,
                       const std::vector<std::string>& kept) {
    TrainedModel model;
    const ModelVariant variant = parse_model_variant(name);
    switch (variant) {
        case ModelVariant::LogReg:
            model = train_logreg(train, config.logreg_l2,
                                 config.logreg_class_weighted);
            break;
        case ModelVariant::Lda:
            model = train_lda(train);
            break;
        case ModelVariant::Qda:
            model = train_qda(train);
            break;
        case ModelVariant::Gnb:
            model = train_gnb(train);
            break;
        case ModelVariant::LinearSvm: {
            GammaSpec g;
            g.scale = false;
            g.value = 1.0;  // unused by the linear kernel
            model = train_svm(
                train, svm_config_from(config, false, config.linear_svm_c, g));
            break;
        }
        case ModelVariant::RbfSvm: {
            FoldPlan plan = stratified_kfold(train.labels, config.cv_folds,
                                             config.seed);
            std::vector<GammaSpec> gammas;
            for (const auto& g : config.grid_gamma)
                gammas.push_back(GammaSpec::from_string(g));
            GridSearchResult grid = grid_search(
                train, config.grid_c, gammas, plan,
                svm_config_from(config, true, 1.0, gammas.front()),
                config.threads);
            write_grid_csv(grid,
                           (fs::path(config.out_dir) / "models" /
                            "grid_search.csv")
                               .string(),
                           config.train_hash());
            const GridCell& best = grid.best();
            log_line(config,
                     "grid search winner: C=" + std::to_string(best.c) +
                         " gamma=" + best.gamma.to_string());
            model = train_svm(
                train, svm_config_from(config, true, best.c, best.gamma));
            break;
        }
        case ModelVariant::Gmm: {
            GmmConfig gc;
            gc.components = config.gmm_components;
            gc.restarts = config.gmm_restarts;
            model = train_gmm_classifier(train, gc, config.seed);
            break;
        }
    }
    model.feature_names = kept;
    if (variant != ModelVariant::Gmm) model.seed = 0;
    return model;
}

}  // namespace

void cmd_extract(const ExperimentConfig& config) {
    if (config.dataset.empty())
        throw Error(ErrorCode::BadConfig, "no dataset configured");
    RunLock lock(config.out_dir);
    write_effective_config(config);

    DatasetManifest manifest = scan_dataset(config.dataset, config.condition);
    const auto counts = manifest.counts();
    log_line(config,
             "dataset: " + std::to_string(manifest.entries.size()) +
                 " clips (train real/fake " + std::to_string(counts[0][0]) +
                 "/" + std::to_string(counts[1][0]) + ", test real/fake " +
                 std::to_string(counts[0][1]) + "/" +
                 std::to_string(counts[1][1]) + ")");

    const ExtractParams params = config.extract_params();
    const std::size_t n = manifest.entries.size();
    std::vector<FeatureVector> results(n);
    std::vector<std::string> failures(n);
    std::vector<bool> ok(n, false);
    std::vector<bool> odd_rate(n, false);

    parallel_for(
        n,
        [&](std::size_t i) {
            const ManifestEntry& entry = manifest.entries[i];
            try {
                AudioClip clip = decode_wav_file(entry.source_path);
                clip.label = entry.label;
                clip.split = entry.split;
                odd_rate[i] = clip.nonstandard_rate;
                results[i] = extract_clip_features(clip, params);
                ok[i] = true;
            } catch (const Error& e) {
                failures[i] = e.what();
            }
        },
        config.threads);

    std::vector<FeatureVector> rows;
    std::size_t n_failed = 0, n_odd = 0;
    {
        std::ofstream skip(fs::path(config.out_dir) / "skip_report.csv");
        skip << "# " << config.extract_hash() << "\npath,error\n";
        for (std::size_t i = 0; i < n; ++i) {
            if (ok[i]) {
                rows.push_back(std::move(results[i]));
                if (odd_rate[i]) ++n_odd;
            } else {
                ++n_failed;
                skip << manifest.entries[i].source_path << ",\""
                     << failures[i] << "\"\n";
            }
        }
    }
    if (n_odd > 0)
        log_line(config, std::to_string(n_odd) +
                             " clips flagged with a nonstandard sample rate");
    if (n_failed > 0)
        log_line(config, std::to_string(n_failed) + " of " + std::to_string(n) +
                             " clips skipped (see skip_report.csv)");
    if (static_cast<double>(n_failed) >
        config.max_skip_fraction * static_cast<double>(n))
        throw Error(ErrorCode::TooManySkips,
                    std::to_string(n_failed) + " of " + std::to_string(n) +
                        " clips failed extraction");

    FeatureTable table = make_feature_table(std::move(rows));
    write_feature_csv(table,
                      (fs::path(config.out_dir) / "features.csv").string(),
                      config.extract_hash());
    write_marker(fs::path(config.out_dir) / "extract.done",
                 config.extract_hash());
    log_line(config, "features.csv written: " +
                         std::to_string(table.rows.size()) + " rows");
}

void cmd_analyze(const ExperimentConfig& config) {
    RunLock lock(config.out_dir);
    write_effective_config(config);
    FeatureTable raw = load_features_checked(config);
    Pipeline p = build_pipeline(config, raw);

    const fs::path dir = fs::path(config.out_dir) / "analysis";
    fs::create_directories(dir / "hist");
    const std::string hash = config.analyze_hash();

    write_anova_csv(p.anova, (dir / "anova.csv").string(), hash);
    for (const auto& name : p.clean_report.dropped)
        log_line(config, "cleaning dropped all-missing feature " + name);
    log_line(config, "ANOVA kept " + std::to_string(p.kept.size()) + " of " +
                         std::to_string(p.cleaned.names.size()) + " features");

    // correlations on imputed (unscaled) training rows, kept features only
    FeatureTable imputed;
    imputed.names = p.kept;
    const auto train_rows = p.cleaned.split_rows(SplitTag::Train);
    const auto& medians = p.pre.medians();
    std::vector<std::size_t> kept_idx;
    for (const auto& name : p.kept)
        kept_idx.push_back(static_cast<std::size_t>(
            std::find(p.cleaned.names.begin(), p.cleaned.names.end(), name) -
            p.cleaned.names.begin()));
    for (std::size_t r : train_rows) {
        FeatureVector row = p.cleaned.rows[r];
        FeatureVector slim;
        slim.clip_ref = row.clip_ref;
        slim.label = row.label;
        slim.split = row.split;
        for (std::size_t c = 0; c < kept_idx.size(); ++c) {
            double v = row.values[kept_idx[c]];
            slim.values.push_back(is_missing(v) ? medians[c] : v);
        }
        imputed.rows.push_back(std::move(slim));
    }

    for (ClipLabel label : {ClipLabel::Real, ClipLabel::Fake}) {
        CorrelationMatrix cm = correlation_matrix(imputed, label, p.kept);
        const std::string stem =
            std::string("corr_") + label_name(label);
        write_correlation_csv(cm, (dir / (stem + ".csv")).string(), hash);
        write_text_file(
            (dir / (stem + ".svg")).string(),
            svg_heatmap(std::string("Feature correlation (") +
                            label_name(label) + ", " + config.condition + ")",
                        cm.names, cm.r, hash));
    }

    // class-conditional histograms over training rows, 50 bins
    const auto tr_real = p.cleaned.class_rows(ClipLabel::Real, SplitTag::Train);
    const auto tr_fake = p.cleaned.class_rows(ClipLabel::Fake, SplitTag::Train);
    for (std::size_t c = 0; c < p.cleaned.names.size(); ++c) {
        std::vector<double> vr, vf;
        for (std::size_t r : tr_real) {
            double v = p.cleaned.rows[r].values[c];
            if (!is_missing(v)) vr.push_back(v);
        }
        for (std::size_t r : tr_fake) {
            double v = p.cleaned.rows[r].values[c];
            if (!is_missing(v)) vf.push_back(v);
        }
        if (vr.empty() && vf.empty()) continue;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (double v : vr) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        for (double v : vf) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        }
        constexpr int kBins = 50;
        SvgHistogram hist;
        hist.label_a = "real";
        hist.label_b = "fake";
        hist.count_a.assign(kBins, 0.0);
        hist.count_b.assign(kBins, 0.0);
        for (int b = 0; b <= kBins; ++b)
            hist.bin_edges.push_back(lo + (hi - lo) * b / kBins);
        auto bin_of = [&](double v) {
            int b = static_cast<int>((v - lo) / (hi - lo) * kBins);
            return std::clamp(b, 0, kBins - 1);
        };
        for (double v : vr) hist.count_a[static_cast<std::size_t>(bin_of(v))]++;
        for (double v : vf) hist.count_b[static_cast<std::size_t>(bin_of(v))]++;

        const std::string& name = p.cleaned.names[c];
        std::ofstream csv(dir / "hist" / (name + ".csv"));
        csv << "# " << hash << "\nbin_lo,bin_hi,count_real,count_fake\n";
        char buf[128];
        for (int b = 0; b < kBins; ++b) {
            std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%g,%g\n",
                          hist.bin_edges[b], hist.bin_edges[b + 1],
                          hist.count_a[b], hist.count_b[b]);
            csv << buf;
        }
        write_text_file((dir / "hist" / (name + ".svg")).string(),
                        svg_histogram(name + " (" + config.condition + ")",
                                      name, hist, hash));
    }

    write_marker(dir / "analyze.done", hash);
    log_line(config, "analysis artifacts written to " + dir.string());
}

void cmd_train(const ExperimentConfig& config) {
    RunLock lock(config.out_dir);
    write_effective_config(config);
    FeatureTable raw = load_features_checked(config);
    Pipeline p = build_pipeline(config, raw);

    const fs::path dir = fs::path(config.out_dir) / "models";
    fs::create_directories(dir);
    const std::string hash = config.train_hash();

    p.pre.save((dir / "preprocessor.csv").string(), hash);
    LabeledMatrix train = p.pre.apply(p.cleaned, SplitTag::Train);

    std::size_t trained = 0;
    for (const std::string& name : config.models) {
        try {
            TrainedModel model = train_one(config, name, train, p.kept);
            save_model(model, (dir / (name + ".json")).string(), hash);
            if (!model.converged)
                log_line(config, name + " flagged as not fully converged");
            ++trained;
            log_line(config, "trained " + name);
        } catch (const Error& e) {
            log_line(config, "model " + name + " failed: " + e.what());
        }
    }
    if (trained == 0)
        throw Error(ErrorCode::TrainingFailed, "no model trained successfully");

    write_marker(dir / "train.done", hash);
}

void cmd_evaluate(const ExperimentConfig& config) {
    RunLock lock(config.out_dir);
    write_effective_config(config);
    FeatureTable raw = load_features_checked(config);

    const fs::path models_dir = fs::path(config.out_dir) / "models";
    std::string pre_comment;
    Preprocessor pre =
        Preprocessor::load((models_dir / "preprocessor.csv").string(),
                           &pre_comment);
    require_hash(pre_comment, config.train_hash(),
                 (models_dir / "preprocessor.csv").string());

    FeatureTable cleaned = clean(raw);
    LabeledMatrix train = pre.apply(cleaned, SplitTag::Train);
    LabeledMatrix test = pre.apply(cleaned, SplitTag::Test);

    std::vector<TrainedModel> models;
    for (const std::string& name : config.models) {
        const fs::path path = models_dir / (name + ".json");
        if (!fs::exists(path)) {
            log_line(config, "model file missing, skipping " + name);
            continue;
        }
        std::string stored_hash;
        TrainedModel model = load_model(path.string(), &stored_hash);
        require_hash(stored_hash, config.train_hash(), path.string());
        models.push_back(std::move(model));
    }
    if (models.empty())
        throw Error(ErrorCode::TrainingFailed, "no trained models to evaluate");

    const fs::path dir = fs::path(config.out_dir) / "eval";
    fs::create_directories(dir / "curves");
    fs::create_directories(dir / "plots");
    const std::string hash = config.eval_hash();

    std::vector<EvalReport> train_reports(models.size()),
        test_reports(models.size());
    parallel_for(
        models.size(),
        [&](std::size_t i) {
            train_reports[i] = evaluate(models[i], train, SplitTag::Train);
            test_reports[i] = evaluate(models[i], test, SplitTag::Test);
        },
        config.threads);

    write_eval_csv(train_reports, test_reports, (dir / "eval.csv").string(),
                   hash);

    static const char* kPalette[] = {"#3366cc", "#dc3912", "#ff9900",
                                     "#109618", "#990099", "#0099c6",
                                     "#dd4477"};
    std::vector<SvgSeries> roc_series, det_series;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const EvalReport& r = test_reports[i];
        write_roc_csv(r.roc,
                      (dir / "curves" / ("roc_" + r.model + ".csv")).string(),
                      hash);
        write_det_csv(r.det,
                      (dir / "curves" / ("det_" + r.model + ".csv")).string(),
                      hash);

        SvgSeries roc_s, det_s;
        roc_s.color = det_s.color = kPalette[i % 7];
        roc_s.label = det_s.label = r.model;
        for (const RocPoint& pt : r.roc.points)
            roc_s.points.emplace_back(pt.fpr, pt.tpr);
        for (const DetPoint& pt : r.det.points)
            det_s.points.emplace_back(pt.far_probit, pt.frr_probit);
        roc_series.push_back(roc_s);
        det_series.push_back(det_s);

        char eer_text[64];
        std::snprintf(eer_text, sizeof(eer_text), "EER = %.1f%%",
                      100.0 * r.eer);
        write_text_file(
            (dir / "plots" / ("det_" + r.model + ".svg")).string(),
            svg_line_chart("DET: " + r.model + " (" + config.condition +
                               "), " + eer_text,
                           "FAR (probit)", "FRR (probit)", {det_s}, hash));
    }
    write_text_file(
        (dir / "plots" / "roc_det_overlay.svg").string(),
        svg_two_panel("ROC and DET curves (" + config.condition + ")", "ROC",
                      "false positive rate", "true positive rate", roc_series,
                      "DET", "FAR (probit)", "FRR (probit)", det_series,
                      hash));

    if (models.size() >= 2) {
        ModelComparison cmp = compare_all(models, test, config.alpha);
        write_mcnemar_csv(cmp, (dir / "mcnemar.csv").string(), hash);
        std::ostringstream rk;
        rk << "# " << hash << "\n";
        for (const auto& [winner, loser] : cmp.ranking_edges)
            rk << cmp.names[winner] << " > " << cmp.names[loser]
               << "  (p_exact=" << cmp.at(winner, loser).p_exact << ")\n";
        write_text_file((dir / "ranking.txt").string(), rk.str());
    }

    write_marker(dir / "eval.done", hash);
    log_line(config, "evaluation written to " + dir.string());
}

void cmd_run_all(const ExperimentConfig& config) {
    const fs::path out(config.out_dir);

    if (marker_matches(out / "extract.done", config.extract_hash()) &&
        fs::exists(out / "features.csv"))
        log_line(config, "extract stage up to date, skipping");
    else
        cmd_extract(config);

    if (marker_matches(out / "analysis" / "analyze.done",
                       config.analyze_hash()))
        log_line(config, "analyze stage up to date, skipping");
    else
        cmd_analyze(config);

    if (marker_matches(out / "models" / "train.done", config.train_hash()))
        log_line(config, "train stage up to date, skipping");
    else
        cmd_train(config);

    if (marker_matches(out / "eval" / "eval.done", config.eval_hash()))
        log_line(config, "evaluate stage up to date, skipping");
    else
        cmd_evaluate(config);

    // artifact manifest and human-readable summary
    nlohmann::json manifest;
    manifest["config_hash"] = config.eval_hash();
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(out)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel =
            fs::relative(entry.path(), out).generic_string();
        if (rel == ".lock" || rel == "artifacts.json" || rel == "run.log")
            continue;
        files.push_back(rel);
    }
    std::sort(files.begin(), files.end());
    manifest["files"] = files;
    write_text_file((out / "artifacts.json").string(), manifest.dump(2) + "\n");

    std::ostringstream summary;
    summary << "condition: " << config.condition << "\n";
    summary << "config: " << config.eval_hash() << "\n\n";
    std::ifstream eval_csv(out / "eval" / "eval.csv");
    std::string line;
    while (std::getline(eval_csv, line))
        if (!line.empty() && line[0] != '#') summary << line << "\n";
    std::ifstream ranking(out / "eval" / "ranking.txt");
    if (ranking) {
        summary << "\nsignificant pairwise wins (McNemar exact p < "
                << config.alpha << "):\n";
        while (std::getline(ranking, line))
            if (!line.empty() && line[0] != '#') summary << "  " << line << "\n";
    }
    write_text_file((out / "summary.txt").string(), summary.str());
    log_line(config, "run complete: " + (out / "summary.txt").string());
}

void cmd_dump(const ExperimentConfig& config, const std::string& wav_path,
              bool spectrogram, bool pitch) {
    fs::create_directories(config.out_dir);
    AudioClip clip = decode_wav_file(wav_path);
    const std::string stem = fs::path(wav_path).stem().string();
    if (spectrogram) {
        Spectrogram spec = stft(clip, config.framing);
        write_spectrogram_csv(
            spec,
            (fs::path(config.out_dir) / (stem + "_spectrogram.csv")).string());
    }
    if (pitch) {
        PitchTrack track = yin_f0(clip, config.yin);
        write_pitch_csv(
            track, (fs::path(config.out_dir) / (stem + "_pitch.csv")).string());
    }
}

}  // namespace spoofdet
