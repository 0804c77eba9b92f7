#include "jenga/evaluation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "jenga/errors.hpp"
#include "jenga/png_io.hpp"
#include "jenga/report_html.hpp"
#include "jenga/util.hpp"

namespace jenga::evaluation {
namespace {

using nlohmann::json;

// Splits a JSON-lines file and parses each non-blank line.
std::vector<json> parse_lines(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        throw ManifestError("cannot read manifest " + path.string() + ": " +
                            e.what());
    }
    std::vector<json> out;
    std::istringstream stream(text);
    std::string line;
    int number = 0;
    while (std::getline(stream, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::exception& e) {
            throw ManifestError(path.string() + " line " +
                                std::to_string(number) + ": " + e.what());
        }
    }
    return out;
}

std::string require_string(const json& doc, const char* field,
                           const std::string& case_id) {
    if (!doc.contains(field) || !doc[field].is_string()) {
        throw ManifestError("case " + case_id + ": missing or non-string field '" +
                            field + "'");
    }
    return doc[field].get<std::string>();
}

std::string case_label(const json& doc) {
    if (doc.contains("id") && doc["id"].is_string())
        return doc["id"].get<std::string>();
    return "(missing id)";
}

std::filesystem::path resolve(const std::filesystem::path& manifest,
                              const std::string& ref) {
    const std::filesystem::path p(ref);
    return p.is_absolute() ? p : manifest.parent_path() / p;
}

// Eager reference check: the image and both masks must exist, decode, be
// nonempty, and agree on dimensions.
void validate_pairwise_files(const PairwiseCase& c) {
    RasterImage image;
    try {
        image = read_png_image(c.image);
    } catch (const Error& e) {
        throw ManifestError("case " + c.id + ": field 'image': " + e.what());
    }
    const struct {
        const char* field;
        const std::filesystem::path& path;
    } masks[] = {{"mask_a", c.mask_a}, {"mask_b", c.mask_b}};
    for (const auto& m : masks) {
        BinaryMask mask;
        try {
            mask = read_png_mask(m.path);
        } catch (const Error& e) {
            throw ManifestError("case " + c.id + ": field '" + m.field +
                                "': " + e.what());
        }
        if (mask.width != image.width || mask.height != image.height) {
            throw ManifestError("case " + c.id + ": field '" + m.field +
                                "': mask dimensions do not match image");
        }
        if (mask.empty()) {
            throw ManifestError("case " + c.id + ": field '" + m.field +
                                "': mask is empty");
        }
    }
}

void sort_results(EvalReport& report) {
    std::sort(report.per_case.begin(), report.per_case.end(),
              [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
}

}  // namespace

std::string EvalReport::accuracy_percent() const {
    return format_percent(correct, total);
}

std::vector<PairwiseCase> load_pairwise_manifest(
    const std::filesystem::path& path) {
    std::vector<PairwiseCase> cases;
    std::set<std::string> ids;
    for (const json& doc : parse_lines(path)) {
        PairwiseCase c;
        c.id = require_string(doc, "id", case_label(doc));
        c.image = resolve(path, require_string(doc, "image", c.id));
        c.mask_a = resolve(path, require_string(doc, "mask_a", c.id));
        c.mask_b = resolve(path, require_string(doc, "mask_b", c.id));
        c.first = require_string(doc, "first", c.id);
        c.source = require_string(doc, "source", c.id);
        if (c.first != "A" && c.first != "B") {
            throw ManifestError("case " + c.id +
                                ": field 'first' must be \"A\" or \"B\"");
        }
        if (!ids.insert(c.id).second) {
            throw ManifestError("case " + c.id + ": duplicate id");
        }
        validate_pairwise_files(c);
        cases.push_back(std::move(c));
    }
    return cases;
}

std::vector<FullSceneCase> load_full_scene_manifest(
    const std::filesystem::path& path) {
    std::vector<FullSceneCase> cases;
    std::set<std::string> ids;
    for (const json& doc : parse_lines(path)) {
        FullSceneCase c;
        c.id = require_string(doc, "id", case_label(doc));
        c.image = resolve(path, require_string(doc, "image", c.id));
        c.verdict_source = require_string(doc, "verdict_source", c.id);
        if (c.verdict_source != "oracle" && c.verdict_source != "human_manifest") {
            throw ManifestError("case " + c.id + ": field 'verdict_source' must "
                                "be \"oracle\" or \"human_manifest\"");
        }
        if (doc.contains("human_verdict")) {
            const std::string v = require_string(doc, "human_verdict", c.id);
            if (v != "pass" && v != "fail") {
                throw ManifestError("case " + c.id +
                                    ": field 'human_verdict' must be "
                                    "\"pass\" or \"fail\"");
            }
            if (c.verdict_source == "oracle") {
                throw ManifestError("case " + c.id +
                                    ": oracle cases cannot carry human verdicts");
            }
            c.human_verdict = v;
        }
        if (!ids.insert(c.id).second) {
            throw ManifestError("case " + c.id + ": duplicate id");
        }
        if (!std::filesystem::exists(c.image)) {
            throw ManifestError("case " + c.id + ": field 'image': file not found: " +
                                c.image.string());
        }
        cases.push_back(std::move(c));
    }
    return cases;
}

std::map<std::string, Prediction> load_predictions(
    const std::filesystem::path& path) {
    std::map<std::string, Prediction> out;
    for (const json& doc : parse_lines(path)) {
        const std::string id = require_string(doc, "id", case_label(doc));
        Prediction p;
        if (doc.contains("first")) {
            p.first = require_string(doc, "first", id);
            if (*p.first != "A" && *p.first != "B") {
                throw ManifestError("case " + id +
                                    ": field 'first' must be \"A\" or \"B\"");
            }
        }
        if (doc.contains("order")) {
            if (!doc["order"].is_array()) {
                throw ManifestError("case " + id + ": field 'order' must be a list");
            }
            for (const json& item : doc["order"]) {
                if (!item.is_string()) {
                    throw ManifestError("case " + id +
                                        ": field 'order' must hold strings");
                }
                p.order.push_back(item.get<std::string>());
            }
        }
        if (!p.first && p.order.empty()) {
            throw ManifestError("case " + id + ": needs 'first' or 'order'");
        }
        if (!out.emplace(id, std::move(p)).second) {
            throw ManifestError("case " + id + ": duplicate id");
        }
    }
    return out;
}

std::map<std::string, VerdictEntry> load_verdicts(
    const std::filesystem::path& path) {
    std::map<std::string, VerdictEntry> out;
    for (const json& doc : parse_lines(path)) {
        const std::string id = require_string(doc, "id", case_label(doc));
        VerdictEntry v;
        v.sequence_dir = require_string(doc, "sequence_dir", id);
        v.verdict = require_string(doc, "verdict", id);
        v.judge = require_string(doc, "judge", id);
        if (v.verdict != "pass" && v.verdict != "fail") {
            throw ManifestError("case " + id +
                                ": field 'verdict' must be \"pass\" or \"fail\"");
        }
        if (!out.emplace(id, std::move(v)).second) {
            throw ManifestError("case " + id + ": duplicate id");
        }
    }
    return out;
}

EvalReport eval_pairwise(const std::vector<PairwiseCase>& cases,
                         const PairwiseMethod& method,
                         const std::string& method_name,
                         const std::string& dataset) {
    if (cases.empty()) throw UsageError("no pairwise cases to evaluate");
    EvalReport report;
    report.method = method_name;
    report.dataset = dataset;
    report.total = static_cast<int>(cases.size());
    for (const PairwiseCase& c : cases) {
        CaseResult result;
        result.id = c.id;
        result.expected = c.first;
        try {
            result.predicted = method(c);
            result.correct = result.predicted == c.first;
        } catch (const std::exception& e) {
            result.predicted = "(failed)";
            result.correct = false;
            result.note = std::string("method failure: ") + e.what();
        }
        if (result.correct) ++report.correct;
        report.per_case.push_back(std::move(result));
    }
    report.accuracy =
        static_cast<double>(report.correct) / static_cast<double>(report.total);
    sort_results(report);
    return report;
}

bool judge_sequence(const blocksworld::BlockScene& scene,
                    const std::vector<BinaryMask>& step_masks,
                    const std::string& terminated) {
    if (terminated != "background_reached") return false;
    if (step_masks.size() != scene.blocks.size()) return false;

    std::vector<std::string> order;
    std::set<std::string> used;
    for (const BinaryMask& mask : step_masks) {
        double best_iou = 0.0;
        const blocksworld::Block* best = nullptr;
        for (const blocksworld::Block& b : scene.blocks) {
            const BinaryMask block_mask =
                mask_from_rect(scene.canvas_w, scene.canvas_h, b.rect);
            const double iou = mask_iou(mask, block_mask);
            if (iou > best_iou) {
                best_iou = iou;
                best = &b;
            }
        }
        if (!best || best_iou < 0.5) return false;
        if (!used.insert(best->id).second) return false;
        order.push_back(best->id);
    }

    if (!blocksworld::valid_sequence(blocksworld::support_graph(scene), order)) {
        return false;
    }
    blocksworld::BlockScene residual = scene;
    for (const std::string& id : order) {
        residual = blocksworld::remove_block(residual, id);
        if (!blocksworld::is_stable(residual)) return false;
    }
    return true;
}

EvalReport eval_full_oracle(const std::vector<FullSceneCase>& cases,
                            const FullSceneRunner& runner,
                            const std::string& method_name,
                            const std::string& dataset) {
    if (cases.empty()) throw UsageError("no full-scene cases to evaluate");
    EvalReport report;
    report.method = method_name;
    report.dataset = dataset;
    for (const FullSceneCase& c : cases) {
        if (c.verdict_source != "oracle") {
            ++report.excluded;
            continue;
        }
        CaseResult result;
        result.id = c.id;
        result.expected = "pass";
        try {
            const RasterImage image = read_png_image(c.image);
            const blocksworld::BlockScene scene =
                blocksworld::scene_from_image(image);
            const engine::RemovalSequence sequence = runner(c, image);
            std::vector<BinaryMask> masks;
            for (const engine::RemovalStep& step : sequence.steps) {
                masks.push_back(step.mask);
            }
            const bool passed = judge_sequence(scene, masks, sequence.terminated);
            result.predicted = passed ? "pass" : "fail";
            result.correct = passed;
        } catch (const std::exception& e) {
            result.predicted = "(failed)";
            result.correct = false;
            result.note = std::string("method failure: ") + e.what();
        }
        if (result.correct) ++report.correct;
        ++report.total;
        report.per_case.push_back(std::move(result));
    }
    report.accuracy = report.total == 0
                          ? 0.0
                          : static_cast<double>(report.correct) / report.total;
    sort_results(report);
    return report;
}

EvalReport eval_full_human(const std::vector<FullSceneCase>& cases,
                           const std::map<std::string, VerdictEntry>& verdicts,
                           const std::string& method_name,
                           const std::string& dataset) {
    if (cases.empty()) throw UsageError("no full-scene cases to evaluate");
    EvalReport report;
    report.method = method_name;
    report.dataset = dataset;
    for (const FullSceneCase& c : cases) {
        std::optional<std::string> verdict = c.human_verdict;
        std::string judge = "manifest";
        if (!verdict) {
            const auto it = verdicts.find(c.id);
            if (it != verdicts.end()) {
                verdict = it->second.verdict;
                judge = it->second.judge;
            }
        }
        if (!verdict) {
            ++report.excluded;
            continue;
        }
        CaseResult result;
        result.id = c.id;
        result.expected = "pass";
        result.predicted = *verdict;
        result.correct = *verdict == "pass";
        result.note = "judge: " + judge;
        if (result.correct) ++report.correct;
        ++report.total;
        report.per_case.push_back(std::move(result));
    }
    report.accuracy = report.total == 0
                          ? 0.0
                          : static_cast<double>(report.correct) / report.total;
    sort_results(report);
    return report;
}

PairwiseMethod engine_pairwise_method(const engine::EngineConfig& cfg,
                                      const SuiteProvider& provider) {
    return [cfg, provider](const PairwiseCase& c) {
        const RasterImage image = read_png_image(c.image);
        const BinaryMask mask_a = read_png_mask(c.mask_a);
        const BinaryMask mask_b = read_png_mask(c.mask_b);
        const backends::BackendSuite suite = provider(c, image);
        return engine::decide_pair(image, mask_a, mask_b, suite, cfg).first;
    };
}

std::vector<AblationCell> run_ablation(
    const std::vector<PairwiseCase>& cases, const std::vector<int>& n_values,
    const std::vector<std::pair<bool, bool>>& slot_configs,
    const engine::EngineConfig& base_cfg, const SuiteProvider& provider,
    const std::string& dataset) {
    if (n_values.empty() || slot_configs.empty()) {
        throw UsageError("ablation grid is empty");
    }
    std::vector<AblationCell> cells;
    for (const int n : n_values) {
        for (const auto& [slot_s, slot_v] : slot_configs) {
            engine::EngineConfig cfg = base_cfg;
            cfg.n = n;
            cfg.score.use_slot_s = slot_s;
            cfg.score.use_slot_v = slot_v;
            std::ostringstream name;
            name << "engine n=" << n << " slots="
                 << (slot_s && slot_v ? "both" : (slot_s ? "S" : "V"));
            AblationCell cell;
            cell.n = n;
            cell.slot_s = slot_s;
            cell.slot_v = slot_v;
            cell.report = eval_pairwise(
                cases, engine_pairwise_method(cfg, provider), name.str(), dataset);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

std::string report_to_json(const EvalReport& report) {
    json rows = json::array();
    for (const CaseResult& r : report.per_case) {
        rows.push_back(json{{"id", r.id},
                            {"expected", r.expected},
                            {"predicted", r.predicted},
                            {"correct", r.correct},
                            {"note", r.note}});
    }
    const json doc{{"method", report.method},
                   {"dataset", report.dataset},
                   {"correct", report.correct},
                   {"total", report.total},
                   {"excluded", report.excluded},
                   {"accuracy", report.accuracy},
                   {"accuracyPercent", report.accuracy_percent()},
                   {"perCase", rows}};
    return doc.dump(2) + "\n";
}

void write_report_files(const std::filesystem::path& dir,
                        const EvalReport& report) {
    std::filesystem::create_directories(dir);
    write_file(dir / "report.json", report_to_json(report));
    std::vector<report::ReportRow> rows;
    for (const CaseResult& r : report.per_case) {
        rows.push_back(report::ReportRow{r.id, r.expected, r.predicted,
                                         r.correct, r.note});
    }
    std::ostringstream line;
    line << report.correct << "/" << report.total << " = "
         << report.accuracy_percent();
    if (report.excluded > 0) line << " (" << report.excluded << " excluded)";
    write_file(dir / "report.html",
               report::render_eval_report("Evaluation report", report.method,
                                          report.dataset, line.str(), rows));
}

}  // namespace jenga::evaluation
