#pragma once

#include <string>
#include <vector>

namespace jenga::report {

struct GalleryStep {
    int index = 0;
    std::string image_file;  // relative to the gallery's own directory
    std::string mask_file;
    std::string object_id;
    double score = 0.0;
};

/// Static step-strip page for a removal sequence. References only files
/// inside its own directory so the directory can be moved as a unit.
std::string render_gallery(const std::string& title,
                           const std::string& initial_file,
                           const std::vector<GalleryStep>& steps,
                           const std::string& terminated);

struct ReportRow {
    std::string id;
    std::string expected;
    std::string predicted;
    bool correct = false;
    std::string note;
};

/// Static accuracy table for an evaluation run.
std::string render_eval_report(const std::string& title,
                               const std::string& method,
                               const std::string& dataset,
                               const std::string& accuracy_line,
                               const std::vector<ReportRow>& rows);

std::string html_escape(const std::string& text);

}  // namespace jenga::report
