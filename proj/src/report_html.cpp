#include "jenga/report_html.hpp"

#include <cstdio>
#include <sstream>

namespace jenga::report {
namespace {

const char* kStyle =
    "body{font-family:system-ui,sans-serif;margin:24px;background:#fafafa}"
    "h1{font-size:20px}.meta{color:#555;margin-bottom:16px}"
    ".strip{display:flex;flex-wrap:wrap;gap:12px}"
    ".step{background:#fff;border:1px solid #ddd;border-radius:6px;"
    "padding:8px;text-align:center}"
    ".step img{display:block;max-width:240px;image-rendering:pixelated}"
    ".step .cap{font-size:12px;color:#333;margin-top:6px}"
    "table{border-collapse:collapse;background:#fff}"
    "td,th{border:1px solid #ddd;padding:4px 10px;font-size:13px}"
    "tr.bad td{background:#fde8e8}";

std::string score_label(double score) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", score);
    return buf;
}

}  // namespace

std::string html_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string render_gallery(const std::string& title,
                           const std::string& initial_file,
                           const std::vector<GalleryStep>& steps,
                           const std::string& terminated) {
    std::ostringstream out;
    out << "<!doctype html>\n<html><head><meta charset=\"utf-8\">\n<title>"
        << html_escape(title) << "</title>\n<style>" << kStyle
        << "</style></head>\n<body>\n<h1>" << html_escape(title) << "</h1>\n"
        << "<div class=\"meta\">" << steps.size()
        << " removal step(s), terminated: " << html_escape(terminated)
        << "</div>\n<div class=\"strip\">\n";
    out << "<div class=\"step\"><img src=\"" << html_escape(initial_file)
        << "\" alt=\"initial\"><div class=\"cap\">initial</div></div>\n";
    for (const GalleryStep& step : steps) {
        out << "<div class=\"step\"><img src=\"" << html_escape(step.image_file)
            << "\" alt=\"step " << step.index << "\"><img src=\""
            << html_escape(step.mask_file) << "\" alt=\"mask " << step.index
            << "\"><div class=\"cap\">step " << step.index << ": removed "
            << html_escape(step.object_id) << " (score "
            << score_label(step.score) << ")</div></div>\n";
    }
    out << "</div>\n</body></html>\n";
    return out.str();
}

std::string render_eval_report(const std::string& title,
                               const std::string& method,
                               const std::string& dataset,
                               const std::string& accuracy_line,
                               const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << "<!doctype html>\n<html><head><meta charset=\"utf-8\">\n<title>"
        << html_escape(title) << "</title>\n<style>" << kStyle
        << "</style></head>\n<body>\n<h1>" << html_escape(title) << "</h1>\n"
        << "<div class=\"meta\">method: " << html_escape(method)
        << " &middot; dataset: " << html_escape(dataset) << " &middot; "
        << html_escape(accuracy_line) << "</div>\n<table>\n"
        << "<tr><th>case</th><th>expected</th><th>predicted</th>"
        << "<th>correct</th><th>note</th></tr>\n";
    for (const ReportRow& row : rows) {
        out << "<tr" << (row.correct ? "" : " class=\"bad\"") << "><td>"
            << html_escape(row.id) << "</td><td>" << html_escape(row.expected)
            << "</td><td>" << html_escape(row.predicted) << "</td><td>"
            << (row.correct ? "yes" : "no") << "</td><td>"
            << html_escape(row.note) << "</td></tr>\n";
    }
    out << "</table>\n</body></html>\n";
    return out.str();
}

}  // namespace jenga::report
