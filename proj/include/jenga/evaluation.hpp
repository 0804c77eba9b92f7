#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jenga/backends.hpp"
#include "jenga/blocksworld.hpp"
#include "jenga/engine.hpp"
#include "jenga/raster.hpp"

namespace jenga::evaluation {

struct PairwiseCase {
    std::string id;
    std::filesystem::path image;
    std::filesystem::path mask_a;
    std::filesystem::path mask_b;
    std::string first;  // ground truth, "A" | "B"
    std::string source;
};

struct FullSceneCase {
    std::string id;
    std::filesystem::path image;
    std::string verdict_source;  // "oracle" | "human_manifest"
    std::optional<std::string> human_verdict;
};

struct Prediction {
    std::optional<std::string> first;
    std::vector<std::string> order;
};

struct VerdictEntry {
    std::string sequence_dir;
    std::string verdict;  // "pass" | "fail"
    std::string judge;
};

struct CaseResult {
    std::string id;
    std::string expected;
    std::string predicted;
    bool correct = false;
    std::string note;
};

struct EvalReport {
    std::string method;
    std::string dataset;
    int correct = 0;
    int total = 0;
    int excluded = 0;  // cases skipped for lack of a verdict
    double accuracy = 0.0;
    std::vector<CaseResult> per_case;  // sorted by case id, length == total

    std::string accuracy_percent() const;
};

/// JSON-lines loaders. Referenced files are resolved relative to the
/// manifest and validated eagerly (existence, parse, nonempty masks,
/// matching dimensions); violations raise ManifestError naming the case and
/// field.
std::vector<PairwiseCase> load_pairwise_manifest(
    const std::filesystem::path& path);
std::vector<FullSceneCase> load_full_scene_manifest(
    const std::filesystem::path& path);
std::map<std::string, Prediction> load_predictions(
    const std::filesystem::path& path);
std::map<std::string, VerdictEntry> load_verdicts(
    const std::filesystem::path& path);

using PairwiseMethod = std::function<std::string(const PairwiseCase&)>;

/// Accuracy of `method` against ground truth. A method failure on a case is
/// recorded as incorrect with the error noted, not propagated.
EvalReport eval_pairwise(const std::vector<PairwiseCase>& cases,
                         const PairwiseMethod& method,
                         const std::string& method_name,
                         const std::string& dataset);

/// Blocksworld verdict for one removal sequence: pass iff the run reached
/// background, every step mask maps to a distinct block (IoU >= 0.5), the
/// order respects the support graph, and every prefix leaves the residual
/// scene stable.
bool judge_sequence(const blocksworld::BlockScene& scene,
                    const std::vector<BinaryMask>& step_masks,
                    const std::string& terminated);

using FullSceneRunner = std::function<engine::RemovalSequence(
    const FullSceneCase&, const RasterImage&)>;

/// Runs the sequencer on every oracle-sourced case and judges it against
/// the scene parsed from the case image. Non-oracle cases are excluded.
EvalReport eval_full_oracle(const std::vector<FullSceneCase>& cases,
                            const FullSceneRunner& runner,
                            const std::string& method_name,
                            const std::string& dataset);

/// Joins cases with human verdicts (inline or from a verdict manifest);
/// cases without a verdict are excluded and counted.
EvalReport eval_full_human(const std::vector<FullSceneCase>& cases,
                           const std::map<std::string, VerdictEntry>& verdicts,
                           const std::string& method_name,
                           const std::string& dataset);

using SuiteProvider = std::function<backends::BackendSuite(
    const PairwiseCase&, const RasterImage&)>;

/// Pairwise method backed by the engine's decide_pair.
PairwiseMethod engine_pairwise_method(const engine::EngineConfig& cfg,
                                      const SuiteProvider& provider);

struct AblationCell {
    int n = 0;
    bool slot_s = true;
    bool slot_v = true;
    EvalReport report;
};

/// One eval_pairwise run per (n, slot configuration) grid cell.
std::vector<AblationCell> run_ablation(
    const std::vector<PairwiseCase>& cases, const std::vector<int>& n_values,
    const std::vector<std::pair<bool, bool>>& slot_configs,
    const engine::EngineConfig& base_cfg, const SuiteProvider& provider,
    const std::string& dataset);

std::string report_to_json(const EvalReport& report);
void write_report_files(const std::filesystem::path& dir,
                        const EvalReport& report);

}  // namespace jenga::evaluation
