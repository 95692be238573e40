#include "depgen/evaluator.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "depgen/errors.hpp"

namespace depgen {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

// The method-name identifier: trailing identifier run of the text before the
// first "(" (or of the whole text when there is none).
std::string extract_identifier(const std::string& text) {
    std::string head = text;
    size_t paren = head.find('(');
    if (paren != std::string::npos) head = head.substr(0, paren);
    head = trim(head);
    size_t end = head.size();
    size_t start = end;
    while (start > 0 && ident_char(head[start - 1])) --start;
    return head.substr(start, end - start);
}

// True when the first argument list in `text` is empty: "(" directly followed
// by ")" up to whitespace. A dangling "(" with nothing after it counts as
// non-empty: the list was opened and not closed, which is the param pattern.
bool empty_arg_list(const std::string& text) {
    size_t paren = text.find('(');
    if (paren == std::string::npos) return true;
    for (size_t j = paren + 1; j < text.size(); ++j) {
        if (std::isspace(static_cast<unsigned char>(text[j]))) continue;
        return text[j] == ')';
    }
    return false;
}

}  // namespace

bool exact_match(const std::string& generated, const std::string& ground_truth) {
    return trim(generated) == trim(ground_truth);
}

double edit_similarity(const std::string& a, const std::string& b, EsNorm norm) {
    if (a.empty() && b.empty()) return 1.0;
    size_t n = a.size(), m = b.size();
    std::vector<size_t> prev(m + 1), cur(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = j;
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= m; ++j) {
            size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    double dist = static_cast<double>(prev[m]);
    double denom = norm == EsNorm::MaxLength ? static_cast<double>(std::max(n, m))
                                             : (static_cast<double>(n + m) / 2.0);
    return 1.0 - dist / denom;
}

bool identifier_match(const std::string& generated, const std::string& ground_truth) {
    std::string g = extract_identifier(generated);
    std::string t = extract_identifier(ground_truth);
    if (g.empty() || t.empty()) return false;  // NoIdentifier counts as non-match
    return g == t;
}

std::set<HallucinationElement> hallucination_elements(const std::string& generated,
                                                      const std::vector<ApiRef>& reference_apis) {
    std::set<HallucinationElement> out;
    std::string ident = extract_identifier(generated);
    bool name_known = false;
    for (const auto& api : reference_apis)
        if (!ident.empty() && api.name == ident) name_known = true;
    if (!name_known) out.insert(HallucinationElement::Name);

    bool has_pattern = generated.find('(') != std::string::npos;
    if (!has_pattern) {
        // the output never opened an argument list: its parameter pattern is
        // itself invalid
        out.insert(HallucinationElement::ParamPattern);
    } else if (name_known) {
        bool empty_args = empty_arg_list(generated);
        bool any_overload_agrees = false;
        for (const auto& api : reference_apis)
            if (api.name == ident && api.has_params == !empty_args) any_overload_agrees = true;
        if (!any_overload_agrees) out.insert(HallucinationElement::ParamPattern);
    }
    return out;
}

MetricReport aggregate(const std::vector<EvalRecord>& records, EsNorm norm) {
    if (records.empty()) throw EmptySetError("no records to aggregate");
    MetricReport r;
    r.n = static_cast<int>(records.size());
    double elements = 0, hallucinated = 0;
    for (const auto& rec : records) {
        r.em += exact_match(rec.generated, rec.ground_truth) ? 1.0 : 0.0;
        r.es += edit_similarity(rec.generated, rec.ground_truth, norm);
        r.im += identifier_match(rec.generated, rec.ground_truth) ? 1.0 : 0.0;
        auto elems = hallucination_elements(rec.generated, rec.reference_apis);
        elements += static_cast<double>(elems.size());
        if (!elems.empty()) hallucinated += 1.0;
        r.mean_time += rec.elapsed;
    }
    r.em /= r.n;
    r.es /= r.n;
    r.im /= r.n;
    r.mihn = elements / r.n;
    r.mahr = hallucinated / r.n;
    r.mean_time /= r.n;
    return r;
}

std::string format_report_table(const MetricReport& report) {
    char buf[256];
    std::ostringstream out;
    out << "  n     EM(%)   ES(%)   IM(%)   MaHR(%)  MiHN   Time(s)\n";
    snprintf(buf, sizeof(buf), "%5d  %6.2f  %6.2f  %6.2f  %7.2f  %5.2f  %8.4f\n", report.n,
             report.em * 100.0, report.es * 100.0, report.im * 100.0, report.mahr * 100.0,
             report.mihn, report.mean_time);
    out << buf;
    return out.str();
}

}  // namespace depgen
