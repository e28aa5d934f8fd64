// Command-line front end over the stepup C API: critical-value computation,
// procedure application to p-value files, reference tables and figure data
// series, and Monte-Carlo error-rate estimation.
#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stepup.h"

using nlohmann::json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct cli_error : std::runtime_error {
    int code;
    cli_error(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] void usage_fail(const std::string& msg) { throw cli_error(kExitUsage, msg); }
[[noreturn]] void runtime_fail(const std::string& msg) { throw cli_error(kExitRuntime, msg); }

void check(stepup_status st, const char* what) {
    if (st == STEPUP_OK) return;
    const std::string msg = std::string(what) + ": " + stepup_last_error();
    if (st == STEPUP_EDOM || st == STEPUP_EINVAL) usage_fail(msg);
    runtime_fail(msg);
}

using seq_ptr = std::unique_ptr<stepup_seq, decltype(&stepup_seq_free)>;
using report_ptr = std::unique_ptr<stepup_report, decltype(&stepup_report_free)>;
using result_ptr = std::unique_ptr<stepup_result, decltype(&stepup_result_free)>;
using model_ptr = std::unique_ptr<stepup_model, decltype(&stepup_model_free)>;

seq_ptr own(stepup_seq* s) { return seq_ptr(s, &stepup_seq_free); }
report_ptr own(stepup_report* r) { return report_ptr(r, &stepup_report_free); }
result_ptr own(stepup_result* r) { return result_ptr(r, &stepup_result_free); }
model_ptr own(stepup_model* m) { return model_ptr(m, &stepup_model_free); }

std::vector<double> seq_values(const stepup_seq* s) {
    std::vector<double> v(stepup_seq_len(s));
    check(stepup_seq_values(s, v.data(), v.size()), "sequence values");
    return v;
}

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_2dp(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) runtime_fail("cannot open output file: " + out_path);
    f << content;
    if (!f) runtime_fail("failed writing output file: " + out_path);
}

// p-value files: CSV with optional "id,p" header, or a headerless single
// column with ids auto-assigned 1..s.
struct PValueFile {
    std::vector<std::string> ids;
    std::vector<double> p;
};

bool parse_double(const std::string& text, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(text, &pos);
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        return pos == text.size();
    } catch (...) {
        return false;
    }
}

std::string strip(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

PValueFile read_pvalue_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) runtime_fail("cannot open input file: " + path);
    PValueFile out;
    std::string line;
    int lineno = 0;
    bool first_content = true;
    while (std::getline(f, line)) {
        ++lineno;
        const std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(t);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(strip(field));
        if (t.back() == ',') fields.push_back("");
        double v = 0.0;
        if (fields.size() == 1) {
            if (!parse_double(fields[0], v)) {
                if (first_content) {  // tolerate a stray single-name header
                    first_content = false;
                    continue;
                }
                runtime_fail("line " + std::to_string(lineno) + ": not a number: " + fields[0]);
            }
            out.ids.push_back(std::to_string(out.ids.size() + 1));
            out.p.push_back(v);
        } else if (fields.size() == 2) {
            if (!parse_double(fields[1], v)) {
                if (first_content) {  // header row
                    first_content = false;
                    continue;
                }
                runtime_fail("line " + std::to_string(lineno) + ": not a number: " + fields[1]);
            }
            if (fields[0].empty())
                runtime_fail("line " + std::to_string(lineno) + ": empty id");
            out.ids.push_back(fields[0]);
            out.p.push_back(v);
        } else {
            runtime_fail("line " + std::to_string(lineno) + ": expected 1 or 2 columns, got " +
                         std::to_string(fields.size()));
        }
        if (!out.p.empty() && !(out.p.back() >= 0.0 && out.p.back() <= 1.0))
            runtime_fail("line " + std::to_string(lineno) + ": p-value outside [0, 1]");
        first_content = false;
    }
    if (out.p.empty()) runtime_fail("input file contains no hypotheses: " + path);
    for (size_t i = 0; i < out.ids.size(); ++i)
        for (size_t j = i + 1; j < out.ids.size(); ++j)
            if (out.ids[i] == out.ids[j]) runtime_fail("duplicate hypothesis id: " + out.ids[i]);
    return out;
}

std::vector<double> read_value_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) runtime_fail("cannot open file: " + path);
    std::vector<double> out;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        double v = 0.0;
        if (!parse_double(t, v))
            runtime_fail("line " + std::to_string(lineno) + ": not a number: " + t);
        out.push_back(v);
    }
    return out;
}

/* ---- shared options --------------------------------------------------- */

struct Options {
    std::string metric;
    std::int64_t k = 1;
    std::string gamma;
    double alpha = 0.05;
    double q = 0.05;
    std::int64_t s = 0;
    std::string tmpl;
    std::string procedure;
    std::string engine;
    std::string input;
    std::string crit_file;
    std::string out;
    std::string format = "json";
    std::int64_t reps = 100000;
    std::uint64_t seed = 20060401;
    std::string model;
    std::int64_t num_true = -1;
    std::string false_policy = "uniform";
    double false_value = 0.0;
    std::string betas_file;
    double inflate = 1.0;
    int threads = 0;
    int which = 0;
};

seq_ptr make_template(const std::string& name, const Options& opt, std::int64_t s) {
    stepup_seq* raw = nullptr;
    if (name == "kfwer13") {
        check(stepup_seq_kfwer(opt.k, s, &raw), "template kfwer13");
    } else if (name == "linear19") {
        check(stepup_seq_linear(s, &raw), "template linear19");
    } else if (name == "fdp26") {
        if (opt.gamma.empty()) usage_fail("--gamma is required for template fdp26");
        check(stepup_seq_fdp(opt.gamma.c_str(), s, &raw), "template fdp26");
    } else {
        usage_fail("unknown template: " + name);
    }
    return own(raw);
}

// Critical values for a named procedure at length s.
seq_ptr make_procedure_values(const std::string& proc, const Options& opt, std::int64_t s,
                              std::string& label) {
    stepup_seq* raw = nullptr;
    label = proc;
    if (proc == "kfwer-stepup") {
        auto base = make_template(opt.tmpl.empty() ? "kfwer13" : opt.tmpl, opt, s);
        check(stepup_seq_kfwer_control(opt.k, s, opt.alpha, base.get(), &raw), "kfwer-stepup");
    } else if (proc == "fdp-stepup") {
        if (opt.gamma.empty()) usage_fail("--gamma is required for fdp-stepup");
        auto base = make_template(opt.tmpl.empty() ? "fdp26" : opt.tmpl, opt, s);
        check(stepup_seq_fdp_control(opt.gamma.c_str(), s, opt.alpha, base.get(), &raw),
              "fdp-stepup");
    } else if (proc == "holm") {
        check(stepup_seq_holm(s, opt.alpha, &raw), "holm");
    } else if (proc == "hochberg") {
        check(stepup_seq_hochberg(s, opt.alpha, &raw), "hochberg");
    } else if (proc == "by-fdr") {
        check(stepup_seq_by_fdr(s, opt.q, &raw), "by-fdr");
    } else if (proc == "by-fdp") {
        if (opt.gamma.empty()) usage_fail("--gamma is required for by-fdp");
        check(stepup_seq_by_fdp(s, opt.gamma.c_str(), opt.alpha, &raw), "by-fdp");
    } else if (proc == "fdr-median-comparator") {
        if (opt.gamma.empty()) usage_fail("--gamma is required for fdr-median-comparator");
        check(stepup_seq_fdr_median(s, opt.gamma.c_str(), &raw), "fdr-median-comparator");
    } else {
        usage_fail("unknown procedure: " + proc);
    }
    return own(raw);
}

/* ---- constants --------------------------------------------------------- */

int cmd_constants(const Options& opt) {
    if (opt.s < 1) usage_fail("--s must be >= 1");
    stepup_seq* crit_raw = nullptr;
    report_ptr report = own(static_cast<stepup_report*>(nullptr));
    std::string metric_desc;

    if (opt.metric == "kfwer") {
        auto base = make_template(opt.tmpl.empty() ? "kfwer13" : opt.tmpl, opt, opt.s);
        stepup_report* rep_raw = nullptr;
        check(stepup_d1(opt.k, opt.s, base.get(), &rep_raw), "d1");
        report = own(rep_raw);
        check(stepup_seq_kfwer_control(opt.k, opt.s, opt.alpha, base.get(), &crit_raw),
              "critical values");
        metric_desc = "kfwer";
    } else if (opt.metric == "fdp") {
        if (opt.gamma.empty()) usage_fail("--gamma is required for --metric fdp");
        auto base = make_template(opt.tmpl.empty() ? "fdp26" : opt.tmpl, opt, opt.s);
        stepup_report* rep_raw = nullptr;
        check(stepup_d2(opt.gamma.c_str(), opt.s, base.get(), &rep_raw), "d2");
        report = own(rep_raw);
        check(stepup_seq_fdp_control(opt.gamma.c_str(), opt.s, opt.alpha, base.get(), &crit_raw),
              "critical values");
        metric_desc = "fdp";
    } else if (opt.metric == "fdr") {
        check(stepup_seq_by_fdr(opt.s, opt.q, &crit_raw), "by-fdr values");
        metric_desc = "fdr";
    } else {
        usage_fail("--metric must be one of kfwer|fdp|fdr");
    }
    auto crit = own(crit_raw);
    const auto values = seq_values(crit.get());

    if (opt.format == "json") {
        json j;
        j["metric"] = metric_desc;
        j["s"] = opt.s;
        if (opt.metric == "kfwer") j["k"] = opt.k;
        if (opt.metric == "fdp") j["gamma"] = opt.gamma;
        if (opt.metric == "fdr") {
            j["q"] = opt.q;
        } else {
            j["alpha"] = opt.alpha;
            j["template"] = opt.tmpl.empty() ? (opt.metric == "kfwer" ? "kfwer13" : "fdp26")
                                             : opt.tmpl;
        }
        j["critical_values"] = values;
        if (report) {
            json scan = json::array();
            for (size_t i = 0; i < stepup_report_len(report.get()); ++i) {
                int64_t card = 0;
                double sv = 0.0;
                check(stepup_report_entry(report.get(), i, &card, &sv), "report entry");
                scan.push_back({{"card", card}, {"S", sv}});
            }
            j["normalization"] = {{"D", stepup_report_d(report.get())},
                                  {"argmax_card", stepup_report_argmax(report.get())},
                                  {"scan", scan}};
        } else {
            j["normalization"] = nullptr;
        }
        write_output(opt.out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "# metric=" << metric_desc << " s=" << opt.s;
        if (opt.metric == "kfwer") os << " k=" << opt.k;
        if (opt.metric == "fdp") os << " gamma=" << opt.gamma;
        if (opt.metric == "fdr")
            os << " q=" << fmt_full(opt.q);
        else
            os << " alpha=" << fmt_full(opt.alpha);
        os << "\n";
        if (report)
            os << "# D=" << fmt_full(stepup_report_d(report.get()))
               << " argmax_card=" << stepup_report_argmax(report.get()) << "\n";
        os << "section,index,value\n";
        for (size_t i = 0; i < values.size(); ++i)
            os << "crit," << (i + 1) << "," << fmt_full(values[i]) << "\n";
        if (report) {
            for (size_t i = 0; i < stepup_report_len(report.get()); ++i) {
                int64_t card = 0;
                double sv = 0.0;
                check(stepup_report_entry(report.get(), i, &card, &sv), "report entry");
                os << "scan," << card << "," << fmt_full(sv) << "\n";
            }
        }
        write_output(opt.out, os.str());
    }
    return 0;
}

/* ---- apply ------------------------------------------------------------- */

int cmd_apply(const Options& opt) {
    if (opt.input.empty()) usage_fail("--input is required");
    const PValueFile data = read_pvalue_file(opt.input);
    const auto s = static_cast<std::int64_t>(data.p.size());

    seq_ptr crit = own(static_cast<stepup_seq*>(nullptr));
    std::string label;
    if (!opt.crit_file.empty()) {
        const auto values = read_value_file(opt.crit_file);
        stepup_seq* raw = nullptr;
        check(stepup_seq_from_values(values.data(), values.size(), &raw), "critical-value file");
        crit = own(raw);
        label = "explicit";
    } else if (!opt.procedure.empty()) {
        crit = make_procedure_values(opt.procedure, opt, s, label);
    } else {
        usage_fail("either --procedure or --crit-file is required");
    }
    if (static_cast<std::int64_t>(stepup_seq_len(crit.get())) != s)
        runtime_fail("critical sequence length does not match the number of p-values");

    const bool step_down =
        opt.engine.empty() ? (label == "holm") : (opt.engine == "stepdown");
    if (!opt.engine.empty() && opt.engine != "stepup" && opt.engine != "stepdown")
        usage_fail("--engine must be stepup or stepdown");

    stepup_result* res_raw = nullptr;
    check(stepup_apply(data.p.data(), data.p.size(), crit.get(), step_down ? 1 : 0, &res_raw),
          "apply");
    auto res = own(res_raw);
    std::vector<int> decisions(data.p.size());
    check(stepup_result_decisions(res.get(), decisions.data(), decisions.size()), "decisions");

    // ids of rejected hypotheses in ascending p order
    std::vector<size_t> order(data.p.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return data.p[a] < data.p[b]; });
    std::vector<std::string> rejected_ids;
    for (size_t idx : order)
        if (decisions[idx]) rejected_ids.push_back(data.ids[idx]);

    const auto crit_values = seq_values(crit.get());
    const std::string proc_name = label + std::string(step_down ? "/stepdown" : "/stepup");

    if (opt.format == "json") {
        json j;
        j["s"] = s;
        j["procedure"] = proc_name;
        j["critical_values"] = crit_values;
        j["num_rejected"] = stepup_result_num_rejected(res.get());
        j["rejected_ids"] = rejected_ids;
        write_output(opt.out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "# s=" << s << " procedure=" << proc_name
           << " num_rejected=" << stepup_result_num_rejected(res.get()) << "\n";
        os << "rank,id,p,critical_value,rejected\n";
        for (size_t r = 0; r < order.size(); ++r) {
            const size_t idx = order[r];
            os << (r + 1) << "," << data.ids[idx] << "," << fmt_full(data.p[idx]) << ","
               << fmt_full(crit_values[r]) << "," << (decisions[idx] ? 1 : 0) << "\n";
        }
        write_output(opt.out, os.str());
    }
    return 0;
}

/* ---- tables ------------------------------------------------------------ */

const std::int64_t kTableGrid[] = {10, 25, 50, 100, 250, 500, 1000, 2000, 5000};

double d1_value(std::int64_t k, std::int64_t s, bool linear) {
    stepup_seq* seq_raw = nullptr;
    check(linear ? stepup_seq_linear(s, &seq_raw) : stepup_seq_kfwer(k, s, &seq_raw), "template");
    auto seq = own(seq_raw);
    stepup_report* rep_raw = nullptr;
    check(stepup_d1(k, s, seq.get(), &rep_raw), "d1");
    auto rep = own(rep_raw);
    return stepup_report_d(rep.get());
}

double d2_value(const char* gamma, std::int64_t s, bool linear) {
    stepup_seq* seq_raw = nullptr;
    check(linear ? stepup_seq_linear(s, &seq_raw) : stepup_seq_fdp(gamma, s, &seq_raw),
          "template");
    auto seq = own(seq_raw);
    stepup_report* rep_raw = nullptr;
    check(stepup_d2(gamma, s, seq.get(), &rep_raw), "d2");
    auto rep = own(rep_raw);
    return stepup_report_d(rep.get());
}

// Ratio of FDP-control values (scale * a_i / D2) to the BY-derived FDP
// constants gamma*scale*i/(s*C_s); min and max over i.
void ratio_extremes(const char* gamma, double gamma_value, std::int64_t s, bool linear,
                    double median_scale, double& out_min, double& out_max) {
    stepup_seq* seq_raw = nullptr;
    check(linear ? stepup_seq_linear(s, &seq_raw) : stepup_seq_fdp(gamma, s, &seq_raw),
          "template");
    auto seq = own(seq_raw);
    stepup_report* rep_raw = nullptr;
    check(stepup_d2(gamma, s, seq.get(), &rep_raw), "d2");
    auto rep = own(rep_raw);
    const double d2v = stepup_report_d(rep.get());
    double cs = 0.0;
    check(stepup_harmonic(s, &cs), "harmonic");
    const auto a = seq_values(seq.get());
    out_min = 0.0;
    out_max = 0.0;
    for (std::int64_t i = 1; i <= s; ++i) {
        const double ratio = median_scale * a[static_cast<size_t>(i - 1)] *
                             static_cast<double>(s) * cs /
                             (d2v * gamma_value * static_cast<double>(i));
        if (i == 1 || ratio < out_min) out_min = ratio;
        if (i == 1 || ratio > out_max) out_max = ratio;
    }
}

int cmd_tables(const Options& opt) {
    std::ostringstream os;
    switch (opt.which) {
        case 1: {
            os << "table,s,k,template,value,value_2dp\n";
            for (std::int64_t k : {std::int64_t{1}, std::int64_t{2}, std::int64_t{3}})
                for (std::int64_t s : kTableGrid)
                    for (bool linear : {false, true}) {
                        const double v = d1_value(k, s, linear);
                        os << "1," << s << "," << k << "," << (linear ? "linear19" : "kfwer13")
                           << "," << fmt_full(v) << "," << fmt_2dp(v) << "\n";
                    }
            break;
        }
        case 2: {
            os << "table,s,gamma,template,value,value_2dp\n";
            for (const char* g : {"1/20", "1/10"})
                for (std::int64_t s : kTableGrid)
                    for (bool linear : {false, true}) {
                        const double v = d2_value(g, s, linear);
                        os << "2," << s << "," << g << "," << (linear ? "linear19" : "fdp26")
                           << "," << fmt_full(v) << "," << fmt_2dp(v) << "\n";
                    }
            os << "# note: the stepdown comparison column is produced by a different method "
                  "and is not computed here\n";
            break;
        }
        case 3:
        case 4: {
            // 3: FDP control at level alpha vs BY-derived constants (ratio is
            //    alpha-free). 4: median-FDP control (alpha = 1/2) vs FDR
            //    constants at level gamma.
            const double scale = opt.which == 3 ? 1.0 : 0.5;
            os << "table,s,gamma,template,min_ratio,max_ratio,min_2dp,max_2dp\n";
            struct G { const char* text; double value; };
            for (const G g : {G{"1/20", 0.05}, G{"1/10", 0.1}})
                for (std::int64_t s : kTableGrid)
                    for (bool linear : {false, true}) {
                        double lo = 0.0, hi = 0.0;
                        ratio_extremes(g.text, g.value, s, linear, scale, lo, hi);
                        os << opt.which << "," << s << "," << g.text << ","
                           << (linear ? "linear19" : "fdp26") << "," << fmt_full(lo) << ","
                           << fmt_full(hi) << "," << fmt_2dp(lo) << "," << fmt_2dp(hi) << "\n";
                    }
            break;
        }
        default:
            usage_fail("--which must be 1, 2, 3 or 4");
    }
    write_output(opt.out, os.str());
    return 0;
}

/* ---- figures ------------------------------------------------------------ */

int cmd_figures(const Options& opt) {
    std::ostringstream os;
    switch (opt.which) {
        case 1: {
            // k-FWER control values from the two templates, k=2, s=100, alpha=0.05.
            const std::int64_t k = 2, s = 100;
            const double alpha = 0.05;
            stepup_seq *b13 = nullptr, *b19 = nullptr, *c13 = nullptr, *c19 = nullptr;
            check(stepup_seq_kfwer(k, s, &b13), "template");
            auto base13 = own(b13);
            check(stepup_seq_linear(s, &b19), "template");
            auto base19 = own(b19);
            check(stepup_seq_kfwer_control(k, s, alpha, base13.get(), &c13), "values");
            auto v13 = own(c13);
            check(stepup_seq_kfwer_control(k, s, alpha, base19.get(), &c19), "values");
            auto v19 = own(c19);
            const auto a = seq_values(v13.get()), b = seq_values(v19.get());
            os << "i,kfwer13,linear19,ratio\n";
            for (size_t i = 0; i < a.size(); ++i)
                os << (i + 1) << "," << fmt_full(a[i]) << "," << fmt_full(b[i]) << ","
                   << fmt_full(a[i] / b[i]) << "\n";
            break;
        }
        case 2: {
            // FDP control values from the two templates, gamma=0.1, s=100, alpha=0.05.
            const std::int64_t s = 100;
            const double alpha = 0.05;
            const char* g = "1/10";
            stepup_seq *b26 = nullptr, *b19 = nullptr, *c26 = nullptr, *c19 = nullptr;
            check(stepup_seq_fdp(g, s, &b26), "template");
            auto base26 = own(b26);
            check(stepup_seq_linear(s, &b19), "template");
            auto base19 = own(b19);
            check(stepup_seq_fdp_control(g, s, alpha, base26.get(), &c26), "values");
            auto v26 = own(c26);
            check(stepup_seq_fdp_control(g, s, alpha, base19.get(), &c19), "values");
            auto v19 = own(c19);
            const auto a = seq_values(v26.get()), b = seq_values(v19.get());
            os << "i,fdp26,linear19,ratio\n";
            for (size_t i = 0; i < a.size(); ++i)
                os << (i + 1) << "," << fmt_full(a[i]) << "," << fmt_full(b[i]) << ","
                   << fmt_full(a[i] / b[i]) << "\n";
            break;
        }
        case 3: {
            // Median-FDP control values vs FDR-control values, s=1000, gamma=0.1.
            const std::int64_t s = 1000;
            const char* g = "1/10";
            stepup_seq *b26 = nullptr, *cmed = nullptr, *cfdr = nullptr;
            check(stepup_seq_fdp(g, s, &b26), "template");
            auto base26 = own(b26);
            check(stepup_seq_fdp_control(g, s, 0.5, base26.get(), &cmed), "values");
            auto vmed = own(cmed);
            check(stepup_seq_fdr_median(s, g, &cfdr), "values");
            auto vfdr = own(cfdr);
            const auto a = seq_values(vmed.get()), b = seq_values(vfdr.get());
            os << "i,median_fdp26,fdr,ratio\n";
            for (size_t i = 0; i < a.size(); ++i)
                os << (i + 1) << "," << fmt_full(a[i]) << "," << fmt_full(b[i]) << ","
                   << fmt_full(a[i] / b[i]) << "\n";
            break;
        }
        default:
            usage_fail("--which must be 1, 2 or 3");
    }
    write_output(opt.out, os.str());
    return 0;
}

/* ---- simulate ------------------------------------------------------------ */

int cmd_simulate(const Options& opt) {
    if (opt.reps < 1) usage_fail("--reps must be >= 1");
    if (opt.s < 1 && opt.betas_file.empty()) usage_fail("--s must be >= 1");

    // Procedure under test: default depends on the model.
    std::string proc = opt.procedure;
    if (proc.empty()) {
        if (opt.model == "kfwer-adversary") proc = "kfwer-stepup";
        else if (opt.model == "fdp-adversary") proc = "fdp-stepup";
        else if (opt.model == "by-counterexample") proc = "by-fdr";
        else proc = "kfwer-stepup";
    }

    std::int64_t s = opt.s;
    seq_ptr crit = own(static_cast<stepup_seq*>(nullptr));
    std::string label;
    if (!opt.crit_file.empty()) {
        const auto values = read_value_file(opt.crit_file);
        stepup_seq* raw = nullptr;
        check(stepup_seq_from_values(values.data(), values.size(), &raw), "critical-value file");
        crit = own(raw);
        label = "explicit";
        if (s == 0) s = static_cast<std::int64_t>(values.size());
    } else {
        crit = make_procedure_values(proc, opt, s, label);
    }
    if (opt.inflate != 1.0) {
        stepup_seq* scaled = nullptr;
        check(stepup_seq_scale(crit.get(), opt.inflate, &scaled), "--inflate");
        crit = own(scaled);
    }

    model_ptr model = own(static_cast<stepup_model*>(nullptr));
    stepup_model* model_raw = nullptr;
    if (opt.model == "indep-uniform") {
        const std::int64_t t = opt.num_true >= 0 ? opt.num_true : s;
        stepup_false_policy fp = STEPUP_FALSE_UNIFORM;
        if (opt.false_policy == "zero") fp = STEPUP_FALSE_ZERO;
        else if (opt.false_policy == "fixed") fp = STEPUP_FALSE_FIXED;
        else if (opt.false_policy == "uniform") fp = STEPUP_FALSE_UNIFORM;
        else usage_fail("--false-policy must be zero|fixed|uniform");
        check(stepup_model_independent_uniform(s, t, fp, opt.false_value, &model_raw), "model");
    } else if (opt.model == "lemma32") {
        if (opt.betas_file.empty()) usage_fail("--betas is required for the lemma32 model");
        const auto betas = read_value_file(opt.betas_file);
        const std::int64_t t = opt.num_true >= 0 ? opt.num_true
                                                 : static_cast<std::int64_t>(betas.size());
        check(stepup_model_lemma32(betas.data(), betas.size(), t, &model_raw), "model");
        s = t;
    } else if (opt.model == "kfwer-adversary") {
        check(stepup_model_kfwer_adversary(opt.k, s, crit.get(), &model_raw), "model");
    } else if (opt.model == "fdp-adversary") {
        if (opt.gamma.empty()) usage_fail("--gamma is required for the fdp-adversary model");
        check(stepup_model_fdp_adversary(opt.gamma.c_str(), s, crit.get(), &model_raw), "model");
    } else if (opt.model == "by-counterexample") {
        check(stepup_model_by_counterexample(s, &model_raw), "model");
    } else {
        usage_fail("--model must be one of "
                   "indep-uniform|lemma32|kfwer-adversary|fdp-adversary|by-counterexample");
    }
    model = own(model_raw);
    if (stepup_model_size(model.get()) != static_cast<std::int64_t>(stepup_seq_len(crit.get())))
        usage_fail("model size and procedure length do not match");

    // Metric: defaults follow the model.
    std::string metric = opt.metric;
    if (metric.empty())
        metric = (opt.model == "fdp-adversary") ? "fdp" : "kfwer";
    stepup_metric_kind mk = STEPUP_METRIC_KFWER;
    if (metric == "kfwer") mk = STEPUP_METRIC_KFWER;
    else if (metric == "fdp") mk = STEPUP_METRIC_FDP_TAIL;
    else if (metric == "fdr") mk = STEPUP_METRIC_FDR;
    else usage_fail("--metric must be kfwer|fdp|fdr");
    if (mk == STEPUP_METRIC_FDP_TAIL && opt.gamma.empty())
        usage_fail("--gamma is required for the fdp metric");

    const bool step_down =
        opt.engine.empty() ? (label == "holm") : (opt.engine == "stepdown");

    stepup_estimate est{};
    check(stepup_simulate(model.get(), crit.get(), step_down ? 1 : 0, mk, opt.k,
                          opt.gamma.empty() ? nullptr : opt.gamma.c_str(), opt.reps, opt.seed,
                          opt.threads, &est),
          "simulate");

    if (opt.format == "json") {
        json j;
        j["model"] = opt.model;
        j["procedure"] = label + std::string(step_down ? "/stepdown" : "/stepup");
        j["metric"] = metric;
        j["estimate"] = est.estimate;
        j["std_error"] = est.std_error;
        j["replications"] = est.replications;
        j["seed"] = est.seed;
        write_output(opt.out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "model,procedure,metric,estimate,std_error,replications,seed\n";
        os << opt.model << "," << label << (step_down ? "/stepdown" : "/stepup") << "," << metric
           << "," << fmt_full(est.estimate) << "," << fmt_full(est.std_error) << ","
           << est.replications << "," << est.seed << "\n";
        write_output(opt.out, os.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"stepup multiple-testing procedures: k-FWER and FDP control under "
                 "arbitrary p-value dependence"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", opt.out, "Output file (default: stdout)");
        cmd->add_option("--format", opt.format, "Output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* constants = app.add_subcommand("constants", "Critical values and normalizing constants");
    constants->add_option("--metric", opt.metric, "kfwer, fdp or fdr")->required();
    constants->add_option("--k", opt.k, "Tolerated false rejections (kfwer)");
    constants->add_option("--gamma", opt.gamma, "FDP threshold, e.g. 1/10 or 0.1");
    constants->add_option("--alpha", opt.alpha, "Error probability level");
    constants->add_option("--q", opt.q, "FDR level (metric fdr)");
    constants->add_option("--s", opt.s, "Number of hypotheses")->required();
    constants->add_option("--template", opt.tmpl, "kfwer13, linear19 or fdp26");
    add_common(constants);

    auto* apply = app.add_subcommand("apply", "Apply a procedure to a p-value file");
    apply->add_option("--input", opt.input, "CSV of id,p rows or a single p column")->required();
    apply->add_option("--procedure", opt.procedure,
                      "kfwer-stepup, fdp-stepup, holm, hochberg, by-fdr, by-fdp or "
                      "fdr-median-comparator");
    apply->add_option("--crit-file", opt.crit_file, "Explicit critical values, one per line");
    apply->add_option("--engine", opt.engine, "stepup or stepdown (default per procedure)");
    apply->add_option("--k", opt.k, "Tolerated false rejections (kfwer-stepup)");
    apply->add_option("--gamma", opt.gamma, "FDP threshold");
    apply->add_option("--alpha", opt.alpha, "Error probability level");
    apply->add_option("--q", opt.q, "FDR level (by-fdr)");
    apply->add_option("--template", opt.tmpl, "kfwer13, linear19 or fdp26");
    add_common(apply);

    auto* tables = app.add_subcommand("tables", "Reference tables of normalizing constants");
    tables->add_option("--which", opt.which, "1, 2, 3 or 4")->required();
    tables->add_option("--out", opt.out, "Output file (default: stdout)");

    auto* figures = app.add_subcommand("figures", "Per-index data series for the figure plots");
    figures->add_option("--which", opt.which, "1, 2 or 3")->required();
    figures->add_option("--out", opt.out, "Output file (default: stdout)");

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo error-rate estimation");
    simulate->add_option("--model", opt.model,
                         "indep-uniform, lemma32, kfwer-adversary, fdp-adversary or "
                         "by-counterexample")
        ->required();
    simulate->add_option("--s", opt.s, "Number of hypotheses");
    simulate->add_option("--k", opt.k, "Tolerated false rejections");
    simulate->add_option("--gamma", opt.gamma, "FDP threshold");
    simulate->add_option("--alpha", opt.alpha, "Error probability level");
    simulate->add_option("--q", opt.q, "FDR level (by-fdr)");
    simulate->add_option("--template", opt.tmpl, "Template for the procedure under test");
    simulate->add_option("--procedure", opt.procedure, "Procedure under test");
    simulate->add_option("--crit-file", opt.crit_file, "Explicit critical values");
    simulate->add_option("--engine", opt.engine, "stepup or stepdown");
    simulate->add_option("--metric", opt.metric, "kfwer, fdp or fdr");
    simulate->add_option("--reps", opt.reps, "Replications (default 100000)");
    simulate->add_option("--seed", opt.seed, "RNG seed");
    simulate->add_option("--threads", opt.threads, "Worker threads (0 = auto)");
    simulate->add_option("--num-true", opt.num_true, "True hypotheses (indep-uniform, lemma32)");
    simulate->add_option("--false-policy", opt.false_policy,
                         "False p-values: zero, fixed or uniform (indep-uniform)");
    simulate->add_option("--false-value", opt.false_value, "Value for --false-policy fixed");
    simulate->add_option("--betas", opt.betas_file, "Beta thresholds file (lemma32 model)");
    simulate->add_option("--inflate", opt.inflate, "Scale the critical values by this factor");
    add_common(simulate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (constants->parsed()) return cmd_constants(opt);
        if (apply->parsed()) return cmd_apply(opt);
        if (tables->parsed()) return cmd_tables(opt);
        if (figures->parsed()) return cmd_figures(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
        usage_fail("no command given");
    } catch (const cli_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
