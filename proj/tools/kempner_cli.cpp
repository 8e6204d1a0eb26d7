#include "CLI11.hpp"
#include "json.hpp"

#include "kempner/bounds.hpp"
#include "kempner/counting.hpp"
#include "kempner/digit_sets.hpp"
#include "kempner/errors.hpp"
#include "kempner/gadic.hpp"
#include "kempner/interval.hpp"
#include "kempner/summation.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using ordered_json = nlohmann::ordered_json;

namespace {

struct OutputOpts {
    std::string format = "json";
    unsigned digits = 20;
    unsigned precision = 128;
};

void add_output_opts(CLI::App* cmd, OutputOpts& out) {
    cmd->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str()
        ->take_last();
    cmd->add_option("--decimal-digits", out.digits, "Digits after the point in decimal strings")
        ->check(CLI::Range(1u, 200u))
        ->capture_default_str()
        ->take_last();
    cmd->add_option("--precision", out.precision, "Working precision in bits")
        ->check(CLI::Range(16u, 16384u))
        ->capture_default_str()
        ->take_last();
}

std::string scalar_text(const ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string csv_cell(const ordered_json& v) {
    const std::string s = scalar_text(v);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (const char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void emit_doc(const ordered_json& doc, const OutputOpts& opts) {
    if (opts.format == "json") {
        std::cout << doc.dump() << "\n";
        return;
    }
    if (opts.format == "csv") {
        std::string header, row;
        bool first = true;
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            if (!first) {
                header += ',';
                row += ',';
            }
            first = false;
            header += it.key();
            row += csv_cell(it.value());
        }
        std::cout << header << "\n" << row << "\n";
        return;
    }
    std::size_t width = 0;
    for (auto it = doc.begin(); it != doc.end(); ++it) width = std::max(width, it.key().size());
    for (auto it = doc.begin(); it != doc.end(); ++it)
        std::cout << it.key() << std::string(width - it.key().size(), ' ') << "  "
                  << scalar_text(it.value()) << "\n";
}

void emit_rows(const std::vector<ordered_json>& rows, const OutputOpts& opts) {
    if (opts.format == "json") {
        ordered_json doc;
        doc["rows"] = rows;
        std::cout << doc.dump() << "\n";
        return;
    }
    if (rows.empty()) return;
    std::vector<std::string> keys;
    for (auto it = rows.front().begin(); it != rows.front().end(); ++it) keys.push_back(it.key());
    if (opts.format == "csv") {
        for (std::size_t i = 0; i < keys.size(); ++i)
            std::cout << (i ? "," : "") << keys[i];
        std::cout << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < keys.size(); ++i)
                std::cout << (i ? "," : "") << (row.contains(keys[i]) ? csv_cell(row[keys[i]]) : "");
            std::cout << "\n";
        }
        return;
    }
    std::vector<std::size_t> width(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) width[i] = keys[i].size();
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : rows) {
        std::vector<std::string> line;
        for (std::size_t i = 0; i < keys.size(); ++i) {
            line.push_back(row.contains(keys[i]) ? scalar_text(row[keys[i]]) : "");
            width[i] = std::max(width[i], line.back().size());
        }
        cells.push_back(std::move(line));
    }
    for (std::size_t i = 0; i < keys.size(); ++i)
        std::cout << (i ? "  " : "") << keys[i] << std::string(width[i] - keys[i].size(), ' ');
    std::cout << "\n";
    for (const auto& line : cells) {
        for (std::size_t i = 0; i < keys.size(); ++i)
            std::cout << (i ? "  " : "") << line[i] << std::string(width[i] - line[i].size(), ' ');
        std::cout << "\n";
    }
}

kempner::BigInt parse_big_natural(const std::string& text) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        throw kempner::parse_error("expected a nonnegative integer, got '" + text + "'",
                                   text.find_first_not_of("0123456789"));
    return kempner::BigInt(text);
}

std::vector<std::size_t> parse_level_list(const std::string& text) {
    const auto to_num = [&](const std::string& s) -> std::size_t {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("malformed level entry '" + s + "' in '" + text + "'");
        return static_cast<std::size_t>(std::stoull(s));
    };
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const std::size_t dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(to_num(part));
            continue;
        }
        const std::size_t a = to_num(part.substr(0, dots));
        const std::size_t b = to_num(part.substr(dots + 2));
        if (a > b) throw std::invalid_argument("descending range '" + part + "' in level list");
        if (b - a > 100000) throw std::invalid_argument("level range '" + part + "' is too wide");
        for (std::size_t m = a; m <= b; ++m) out.push_back(m);
    }
    if (out.empty()) throw std::invalid_argument("empty level list");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::uint32_t> parse_digit_list(const std::string& text) {
    std::vector<std::uint32_t> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("malformed digit '" + part + "' in '" + text + "'");
        const unsigned long long v = std::stoull(part);
        if (v > 0x7fffffffull) throw std::invalid_argument("digit '" + part + "' is too large");
        out.push_back(static_cast<std::uint32_t>(v));
    }
    if (out.empty()) throw std::invalid_argument("empty digit list");
    return out;
}

// delta accepts either an exact rational "p/q" or a decimal literal, which
// is converted exactly (0.35 -> 35/100) so threshold ties stay decidable.
kempner::BigRat parse_delta(const std::string& text) {
    const std::size_t dot = text.find('.');
    if (dot == std::string::npos) return kempner::parse_rational(text);
    const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw kempner::parse_error("malformed decimal '" + text + "'", 0);
    kempner::BigInt den = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    return kempner::BigRat(kempner::BigInt(digits), den);
}

kempner::LambdaFamily make_family(const std::string& seq, const std::string& forb,
                                  const std::string& lambda) {
    return kempner::LambdaFamily(kempner::GadicSequence::parse(seq),
                                 kempner::ForbiddenSpec::parse(forb),
                                 kempner::parse_rational(lambda));
}

ordered_json witness_json(const kempner::CriterionWitness& w) {
    ordered_json j;
    j["k"] = w.k;
    j["index_count"] = w.index_count;
    j["conv_threshold"] = w.conv_threshold;
    j["div_threshold"] = w.div_threshold;
    j["conv_holds"] = w.conv_holds;
    j["div_holds"] = w.div_holds;
    return j;
}

std::string render_inequality(const kempner::CriterionWitness& w, const kempner::BigRat& delta,
                              std::uint32_t d, bool convergence) {
    std::ostringstream os;
    os.precision(10);
    if (convergence)
        os << "I(" << w.k << ") = " << w.index_count << (w.conv_holds ? " >= " : " < ") << "(1 + "
           << kempner::to_string(delta) << ") * ln(" << w.k << ") / ln(" << d << "/" << d - 1
           << ") = " << w.conv_threshold;
    else
        os << "I(" << w.k << ") = " << w.index_count << (w.div_holds ? " <= " : " > ") << "(1 - "
           << kempner::to_string(delta) << ") * ln(" << w.k << ") / ln(" << d
           << ") = " << w.div_threshold;
    return os.str();
}

ordered_json enclosure_json(const kempner::SumEnclosure& e, const OutputOpts& out) {
    ordered_json j;
    j["sigma"] = e.sigma;
    j["M"] = e.levels_exact;
    j["M_prime"] = e.levels_counted;
    j["lower"] = e.sum.lo_string(out.digits);
    j["upper"] = e.sum.hi_string(out.digits);
    j["width"] = e.width();
    j["tail_ratio"] = e.tail_ratio.hi_double();
    j["partial_upper"] = e.partial.hi_string(out.digits);
    j["counted_tail_upper"] = e.counted_tail.hi_string(out.digits);
    j["analytic_tail_upper"] = e.analytic_tail.hi_string(out.digits);
    j["precision_bits"] = static_cast<std::int64_t>(kempner::interval_precision());
    return j;
}

// Pull --config out of the raw arguments and splice the file's key/value
// pairs in right after the subcommand, so explicitly passed flags (parsed
// with take_last) win over the file.
std::vector<std::string> apply_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw std::invalid_argument("--config needs a file path");
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (path.empty()) return args;
    if (args.empty() || args[0].rfind('-', 0) == 0)
        throw std::invalid_argument("--config requires the subcommand to come first");
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    ordered_json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    std::vector<std::string> spliced;
    spliced.push_back(args[0]);
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        if (it.value().is_boolean()) {
            if (it.value().get<bool>()) spliced.push_back("--" + it.key());
            continue;
        }
        spliced.push_back("--" + it.key());
        spliced.push_back(scalar_text(it.value()));
    }
    spliced.insert(spliced.end(), args.begin() + 1, args.end());
    return spliced;
}

int run(std::vector<std::string> args) {
    CLI::App app{"Digit-restricted integer families: codecs, exact counts, tail bounds, "
                 "convergence criteria, and enclosed series sums",
                 "kempner"};
    app.require_subcommand(1);

    // encode ----------------------------------------------------------------
    struct {
        std::string sequence, n;
        OutputOpts out;
    } enc;
    auto* enc_cmd = app.add_subcommand("encode", "Digits of n in the sequence's mixed radix");
    enc_cmd->add_option("--sequence", enc.sequence, "Sequence spec, e.g. constant:10")
        ->required()
        ->take_last();
    enc_cmd->add_option("--n", enc.n, "Nonnegative integer to encode")->required()->take_last();
    add_output_opts(enc_cmd, enc.out);
    enc_cmd->callback([&] {
        kempner::set_interval_precision(enc.out.precision);
        const auto seq = kempner::GadicSequence::parse(enc.sequence);
        const auto dv = kempner::encode(seq, parse_big_natural(enc.n));
        ordered_json doc;
        doc["digits"] = dv.digits;
        doc["m"] = dv.length();
        emit_doc(doc, enc.out);
    });

    // decode ----------------------------------------------------------------
    struct {
        std::string sequence, digits;
        OutputOpts out;
    } dec;
    auto* dec_cmd = app.add_subcommand("decode", "Integer value of a digit list (least significant first)");
    dec_cmd->add_option("--sequence", dec.sequence, "Sequence spec")->required()->take_last();
    dec_cmd->add_option("--digits", dec.digits, "Comma-separated digits, least significant first")
        ->required()
        ->take_last();
    add_output_opts(dec_cmd, dec.out);
    dec_cmd->callback([&] {
        kempner::set_interval_precision(dec.out.precision);
        const auto seq = kempner::GadicSequence::parse(dec.sequence);
        const auto digits = parse_digit_list(dec.digits);
        std::vector<std::uint32_t> radices(digits.size());
        for (std::size_t i = 0; i < digits.size(); ++i) radices[i] = seq.quotient(i);
        const auto dv = kempner::DigitVector::make(digits, radices);
        ordered_json doc;
        doc["n"] = kempner::to_string(kempner::decode(seq, dv));
        doc["m"] = dv.length();
        emit_doc(doc, dec.out);
    });

    // count -----------------------------------------------------------------
    struct {
        std::string sequence, forbidden, lambda = "0/1", levels;
        OutputOpts out;
    } cnt;
    auto* cnt_cmd = app.add_subcommand("count", "Exact member counts and tail probability per level");
    cnt_cmd->add_option("--sequence", cnt.sequence, "Sequence spec")->required()->take_last();
    cnt_cmd->add_option("--forbidden", cnt.forbidden, "Forbidden-digit spec, e.g. uniform:{9}")
        ->required()
        ->take_last();
    cnt_cmd->add_option("--lambda", cnt.lambda, "Violation budget as an exact rational p/q")
        ->capture_default_str()
        ->take_last();
    cnt_cmd->add_option("--m", cnt.levels, "Level(s): single, a..b, or comma list")
        ->required()
        ->take_last();
    add_output_opts(cnt_cmd, cnt.out);
    cnt_cmd->callback([&] {
        kempner::set_interval_precision(cnt.out.precision);
        const auto fam = make_family(cnt.sequence, cnt.forbidden, cnt.lambda);
        const auto levels = parse_level_list(cnt.levels);
        if (levels.front() < 1) throw std::invalid_argument("levels must be >= 1");
        const auto bases = fam.sequence().bases(levels.back());
        kempner::LevelCounter counter(fam);
        std::vector<ordered_json> rows;
        for (const std::size_t m : levels) {
            counter.advance_to(m);
            const auto lc = counter.current();
            const auto tail = kempner::lower_tail(
                counter.distribution(),
                fam.lambda() * kempner::BigRat(static_cast<std::uint64_t>(m)));
            ordered_json row;
            row["m"] = m;
            row["g_m"] = kempner::to_string(bases[m]);
            row["Im_size"] = kempner::to_string(kempner::BigInt(bases[m] - bases[m - 1]));
            row["members_in_Im"] = kempner::to_string(lc.members_in_Im);
            row["members_in_Jm"] = kempner::to_string(lc.members_in_Jm);
            row["tail_probability"] =
                kempner::Interval::from_rational(tail).lo_string(cnt.out.digits);
            rows.push_back(std::move(row));
        }
        emit_rows(rows, cnt.out);
    });

    // prob ------------------------------------------------------------------
    struct {
        std::string sequence, forbidden, lambda = "0/1";
        std::size_t m = 1;
        OutputOpts out;
    } prb;
    auto* prb_cmd = app.add_subcommand("prob", "Exact membership probability Pr(X <= lambda m) on J_m");
    prb_cmd->add_option("--sequence", prb.sequence, "Sequence spec")->required()->take_last();
    prb_cmd->add_option("--forbidden", prb.forbidden, "Forbidden-digit spec")->required()->take_last();
    prb_cmd->add_option("--lambda", prb.lambda, "Exact rational p/q")
        ->capture_default_str()
        ->take_last();
    prb_cmd->add_option("--m", prb.m, "Level")->required()->check(CLI::PositiveNumber)->take_last();
    add_output_opts(prb_cmd, prb.out);
    prb_cmd->callback([&] {
        kempner::set_interval_precision(prb.out.precision);
        const auto fam = make_family(prb.sequence, prb.forbidden, prb.lambda);
        const auto tail = kempner::tail_probability(fam, prb.m);
        ordered_json doc;
        doc["m"] = prb.m;
        doc["threshold"] = fam.violation_threshold(prb.m);
        doc["numerator"] = kempner::to_string(kempner::rat_num(tail));
        doc["denominator"] = kempner::to_string(kempner::rat_den(tail));
        doc["decimal"] = kempner::Interval::from_rational(tail).lo_string(prb.out.digits);
        emit_doc(doc, prb.out);
    });

    // bound -----------------------------------------------------------------
    struct {
        std::string sequence, forbidden, lambda = "0/1", levels;
        OutputOpts out;
    } bnd;
    auto* bnd_cmd = app.add_subcommand("bound", "Exact level counts against the analytic level bound");
    bnd_cmd->add_option("--sequence", bnd.sequence, "Sequence spec")->required()->take_last();
    bnd_cmd->add_option("--forbidden", bnd.forbidden, "Forbidden-digit spec")->required()->take_last();
    bnd_cmd->add_option("--lambda", bnd.lambda, "Exact rational p/q")
        ->capture_default_str()
        ->take_last();
    bnd_cmd->add_option("--m", bnd.levels, "Level(s): single, a..b, or comma list")
        ->required()
        ->take_last();
    add_output_opts(bnd_cmd, bnd.out);
    bnd_cmd->callback([&] {
        kempner::set_interval_precision(bnd.out.precision);
        const auto fam = make_family(bnd.sequence, bnd.forbidden, bnd.lambda);
        const auto levels = parse_level_list(bnd.levels);
        if (levels.front() < 1) throw std::invalid_argument("levels must be >= 1");
        kempner::LevelCounter counter(fam);
        std::vector<ordered_json> rows;
        for (const std::size_t m : levels) {
            counter.advance_to(m);
            const auto exact = counter.current().members_in_Im;
            const auto bound = kempner::level_count_bound(fam, m);
            const auto ratio = kempner::Interval::from_bigint(exact) / bound;
            ordered_json row;
            row["m"] = m;
            row["members_in_Im"] = kempner::to_string(exact);
            row["level_bound"] = bound.hi_double();
            row["ratio"] = ratio.hi_double();
            rows.push_back(std::move(row));
        }
        emit_rows(rows, bnd.out);
    });

    // abscissa ----------------------------------------------------------------
    struct {
        std::uint32_t d = 10;
        std::string lambda = "0/1";
        OutputOpts out;
    } abs_;
    auto* abs_cmd = app.add_subcommand("abscissa", "Upper bound on the abscissa of convergence");
    abs_cmd->add_option("--d", abs_.d, "Uniform quotient bound")->required()->take_last();
    abs_cmd->add_option("--lambda", abs_.lambda, "Exact rational p/q")
        ->capture_default_str()
        ->take_last();
    add_output_opts(abs_cmd, abs_.out);
    abs_cmd->callback([&] {
        kempner::set_interval_precision(abs_.out.precision);
        const auto lambda = kempner::parse_rational(abs_.lambda);
        const auto bound = kempner::abscissa_bound(abs_.d, lambda);
        const auto window = kempner::sigma_window(abs_.d, lambda);
        ordered_json doc;
        doc["d"] = abs_.d;
        doc["lambda"] = kempner::to_string(lambda);
        doc["abscissa"] = bound.hi_double();
        doc["abscissa_decimal"] = bound.hi_string(abs_.out.digits);
        doc["window_low"] = window.low.hi_double();
        doc["window_high"] = window.high;
        emit_doc(doc, abs_.out);
    });

    // criterion ---------------------------------------------------------------
    struct {
        std::string sequence, forbidden, index;
        bool strict = false;
        std::uint32_t d = 0;
        std::string delta;
        std::uint64_t k_min = 0, k_max = 0;
        OutputOpts out;
    } cri;
    auto* cri_cmd =
        app.add_subcommand("criterion", "Index-density convergence/divergence check over a k range");
    cri_cmd->add_option("--sequence", cri.sequence, "Sequence spec")->required()->take_last();
    cri_cmd->add_option("--forbidden", cri.forbidden, "Forbidden-digit spec")->required()->take_last();
    cri_cmd->add_option("--index", cri.index, "Index set: finite:..., arith:first=..,step=.., or all")
        ->required()
        ->take_last();
    cri_cmd->add_flag("--strict-zeros", cri.strict,
                      "Apply forbidden sets to the implicit zeros above the top digit");
    cri_cmd->add_option("--d", cri.d, "Uniform quotient bound (must dominate the sequence)")
        ->required()
        ->take_last();
    cri_cmd->add_option("--delta", cri.delta, "Margin in (0,1): rational p/q or exact decimal")
        ->required()
        ->take_last();
    cri_cmd->add_option("--k-min", cri.k_min, "Smallest tested k")->required()->take_last();
    cri_cmd->add_option("--k-max", cri.k_max, "Largest tested k")->required()->take_last();
    add_output_opts(cri_cmd, cri.out);
    cri_cmd->callback([&] {
        kempner::set_interval_precision(cri.out.precision);
        const kempner::IndexedFamily fam(kempner::GadicSequence::parse(cri.sequence),
                                         kempner::ForbiddenSpec::parse(cri.forbidden),
                                         kempner::IndexSet::parse(cri.index), cri.strict);
        const auto verdict =
            kempner::criterion_check(fam, cri.d, parse_delta(cri.delta), cri.k_min, cri.k_max);
        ordered_json doc;
        doc["verdict"] = kempner::to_string(verdict.verdict);
        doc["delta"] = kempner::to_string(verdict.delta);
        doc["k_lo"] = verdict.k_lo;
        doc["k_hi"] = verdict.k_hi;
        if (verdict.verdict != kempner::Verdict::Inconclusive)
            doc["k_threshold"] = verdict.k_threshold;
        doc["witness_min"] = witness_json(verdict.at_min);
        doc["witness_max"] = witness_json(verdict.at_max);
        const bool conv = verdict.verdict == kempner::Verdict::Converges;
        if (verdict.verdict == kempner::Verdict::Inconclusive) {
            doc["witness"] = render_inequality(verdict.at_max, verdict.delta, cri.d, true) + "; " +
                             render_inequality(verdict.at_max, verdict.delta, cri.d, false);
        } else {
            doc["witness"] = render_inequality(verdict.at_max, verdict.delta, cri.d, conv) +
                             " [held at every tested k >= " +
                             std::to_string(verdict.k_threshold) + "]";
        }
        emit_doc(doc, cri.out);
    });

    // sum ---------------------------------------------------------------------
    struct {
        std::string sequence, forbidden, lambda = "0/1", levels;
        double sigma = 1.0;
        std::size_t tail_depth = 200;
        std::uint64_t budget = kempner::kDefaultEnumerationBudget;
        OutputOpts out;
    } sum;
    auto* sum_cmd = app.add_subcommand("sum", "Two-sided enclosure of the family's power sum");
    sum_cmd->add_option("--sequence", sum.sequence, "Sequence spec")->required()->take_last();
    sum_cmd->add_option("--forbidden", sum.forbidden, "Forbidden-digit spec")->required()->take_last();
    sum_cmd->add_option("--lambda", sum.lambda, "Exact rational p/q")
        ->capture_default_str()
        ->take_last();
    sum_cmd->add_option("--sigma", sum.sigma, "Exponent sigma")->capture_default_str()->take_last();
    sum_cmd->add_option("--levels", sum.levels, "Enumerated level(s) M: single, a..b, or comma list")
        ->required()
        ->take_last();
    sum_cmd->add_option("--tail-depth", sum.tail_depth, "Exactly counted levels past M")
        ->capture_default_str()
        ->take_last();
    sum_cmd->add_option("--budget", sum.budget, "Enumeration budget on g_M")
        ->capture_default_str()
        ->take_last();
    add_output_opts(sum_cmd, sum.out);
    sum_cmd->callback([&] {
        kempner::set_interval_precision(sum.out.precision);
        const auto fam = make_family(sum.sequence, sum.forbidden, sum.lambda);
        const auto levels = parse_level_list(sum.levels);
        if (levels.size() == 1) {
            const auto enc = kempner::sum_enclosure(fam, sum.sigma, levels.front(),
                                                    levels.front() + sum.tail_depth, sum.budget);
            emit_doc(enclosure_json(enc, sum.out), sum.out);
            return;
        }
        const auto table =
            kempner::convergence_table(fam, sum.sigma, levels, sum.tail_depth, sum.budget);
        std::vector<ordered_json> rows;
        for (const auto& row : table) {
            ordered_json j;
            j["M"] = row.M;
            if (row.ok) {
                j["M_prime"] = row.enclosure.levels_counted;
                j["lower"] = row.enclosure.sum.lo_string(sum.out.digits);
                j["upper"] = row.enclosure.sum.hi_string(sum.out.digits);
                j["width"] = row.enclosure.width();
                j["error"] = "";
            } else {
                j["M_prime"] = row.M + sum.tail_depth;
                j["lower"] = "";
                j["upper"] = "";
                j["width"] = nullptr;
                j["error"] = row.error;
            }
            rows.push_back(std::move(j));
        }
        emit_rows(rows, sum.out);
    });

    // mc ----------------------------------------------------------------------
    struct {
        std::string sequence, forbidden, lambda = "0/1";
        std::size_t m = 1;
        std::uint64_t samples = 100000;
        std::uint64_t seed = 1;
        OutputOpts out;
    } mc;
    auto* mc_cmd = app.add_subcommand("mc", "Monte-Carlo estimate of the membership probability");
    mc_cmd->add_option("--sequence", mc.sequence, "Sequence spec")->required()->take_last();
    mc_cmd->add_option("--forbidden", mc.forbidden, "Forbidden-digit spec")->required()->take_last();
    mc_cmd->add_option("--lambda", mc.lambda, "Exact rational p/q")
        ->capture_default_str()
        ->take_last();
    mc_cmd->add_option("--m", mc.m, "Level")->required()->check(CLI::PositiveNumber)->take_last();
    mc_cmd->add_option("--samples", mc.samples, "Sample count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str()
        ->take_last();
    mc_cmd->add_option("--seed", mc.seed, "RNG seed")->capture_default_str()->take_last();
    add_output_opts(mc_cmd, mc.out);
    mc_cmd->callback([&] {
        kempner::set_interval_precision(mc.out.precision);
        const auto fam = make_family(mc.sequence, mc.forbidden, mc.lambda);
        const auto est = kempner::monte_carlo_tail(fam, mc.m, mc.samples, mc.seed);
        ordered_json doc;
        doc["m"] = mc.m;
        doc["samples"] = est.samples;
        doc["seed"] = mc.seed;
        doc["successes"] = est.successes;
        doc["estimate"] = est.estimate;
        doc["std_error"] = est.std_error;
        emit_doc(doc, mc.out);
    });

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run(apply_config(std::move(args)));
    } catch (const kempner::regime_error& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return 3;
    } catch (const kempner::resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
