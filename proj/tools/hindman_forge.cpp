// Command-line surface: load a structure, run a search / forge / extraction,
// emit a machine-readable JSON report. Every emitted witness, basis, or
// certificate is re-verified here by direct evaluation before it is printed,
// independent of the search that produced it.
//
// Exit codes: 0 ip/ok, 1 negative-exact / refusal / mismatch, 2 exhausted,
// 3 truncated, 64 usage or configuration error.
#include <hindman/extract.hpp>
#include <hindman/json_io.hpp>

#include <CLI11.hpp>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace hindman;
using io::json;

namespace {

constexpr int exit_ok = 0;       // ip found / command succeeded
constexpr int exit_negative = 1; // exact negative, refusal, or verification mismatch
constexpr int exit_exhausted = 2;
constexpr int exit_truncated = 3;
constexpr int exit_usage = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Spec parsing: inline JSON, @file indirection, or compact shorthands.
// ---------------------------------------------------------------------------

json read_spec_json(const std::string& spec) {
    if (!spec.empty() && spec[0] == '@') {
        std::ifstream in(spec.substr(1));
        if (!in) throw UsageError("cannot open spec file: " + spec.substr(1));
        return json::parse(in);
    }
    return json::parse(spec);
}

SemigroupHandle parse_semigroup(const std::string& spec) {
    if (spec == "nat-add") return SemigroupHandle::nat_add();
    if (spec == "nat-mul") return SemigroupHandle::nat_mul();
    if (spec.rfind("free-word:", 0) == 0) return SemigroupHandle::free_word(spec.substr(10));
    if (!spec.empty() && (spec[0] == '{' || spec[0] == '@')) return io::semigroup_from_json(read_spec_json(spec));
    throw UsageError("unrecognized semigroup spec: " + spec);
}

json predicate_spec_to_json(const std::string& spec) {
    if (!spec.empty() && (spec[0] == '{' || spec[0] == '@')) return read_spec_json(spec);
    if (spec.rfind("mod:", 0) == 0) {
        std::istringstream in(spec.substr(4));
        std::string d_text, residues_text;
        if (!std::getline(in, d_text, ':') || !std::getline(in, residues_text))
            throw UsageError("mod shorthand is mod:D:r1,r2,...: " + spec);
        json residues = json::array();
        std::istringstream rs(residues_text);
        for (std::string r; std::getline(rs, r, ',');) residues.push_back(std::stoul(r));
        return json{{"type", "mod"}, {"d", std::stoul(d_text)}, {"residues", std::move(residues)}};
    }
    if (spec.rfind("bitset:", 0) == 0) {
        std::istringstream in(spec.substr(7));
        std::string window_text, bits;
        if (!std::getline(in, window_text, ':') || !std::getline(in, bits))
            throw UsageError("bitset shorthand is bitset:WINDOW:BASE64: " + spec);
        return json{{"type", "explicit-bitset"}, {"window", std::stoull(window_text)}, {"bits", bits}};
    }
    throw UsageError("unrecognized predicate spec: " + spec);
}

bool is_identifier(std::string_view s) {
    if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

/// "NAME=SPEC" when NAME is an identifier; bare specs get positional default
/// names X, Y, P2, P3, ...
std::vector<std::pair<std::string, SetPredicate>> parse_predicates(const std::vector<std::string>& specs,
                                                                   const SemigroupHandle& carrier) {
    std::vector<std::pair<std::string, SetPredicate>> out;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        std::string name, body = specs[i];
        auto eq = specs[i].find('=');
        if (eq != std::string::npos && is_identifier(std::string_view(specs[i]).substr(0, eq))) {
            name = specs[i].substr(0, eq);
            body = specs[i].substr(eq + 1);
        } else {
            name = i == 0 ? "X" : i == 1 ? "Y" : "P" + std::to_string(i);
        }
        out.emplace_back(std::move(name), io::predicate_from_json(predicate_spec_to_json(body), carrier));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Independent re-verification helpers (no code shared with the searches).
// ---------------------------------------------------------------------------

/// Finite products of the basis in index order, recomputed by folding the
/// carrier operation directly.
std::vector<Element> refold_products(const SemigroupHandle& s, const std::vector<Element>& basis) {
    std::vector<Element> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << basis.size()); ++mask) {
        std::optional<Element> acc;
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (mask >> i & 1) acc = acc ? s.product(*acc, basis[i]) : basis[i];
        out.push_back(*acc);
    }
    std::sort(out.begin(), out.end(), [](Element a, Element b) { return a.index < b.index; });
    out.erase(std::unique(out.begin(), out.end(), [](Element a, Element b) { return a.index == b.index; }),
              out.end());
    return out;
}

/// Re-check an ip witness: refold its products and evaluate the predicate on
/// each, then confirm the recorded product set matches the refold.
void reverify_witness(const SemigroupHandle& s, const SetPredicate& x, const IpWitness& w) {
    std::vector<Element> products = refold_products(s, w.basis);
    if (products.size() != w.fp.size())
        throw std::logic_error("witness product set disagrees with direct refold");
    for (std::size_t i = 0; i < products.size(); ++i) {
        if (products[i].index != w.fp[i].index)
            throw std::logic_error("witness product set disagrees with direct refold");
        if (!x.contains(products[i]))
            throw std::logic_error("witness product " + s.display(products[i]) + " falls outside the set");
    }
}

/// Depth-k monochromatic finite-sums check used to re-verify window
/// certificates; deliberately a fresh implementation of the definition.
bool coloring_has_mono_sums(unsigned k, const std::vector<int>& coloring) {
    std::size_t n = coloring.size();
    std::vector<std::uint64_t> chosen;
    std::function<bool(std::uint64_t)> search = [&](std::uint64_t start) {
        if (chosen.size() == k) {
            for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
                std::uint64_t sum = 0;
                for (std::size_t i = 0; i < k; ++i)
                    if (mask >> i & 1) sum += chosen[i];
                if (sum > n || coloring[sum - 1] != coloring[chosen[0] - 1]) return false;
            }
            return true;
        }
        for (std::uint64_t v = start; v <= n; ++v) {
            chosen.push_back(v);
            if (search(v + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    return search(1);
}

void write_report(const json& report, const std::string& out_path) {
    std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw UsageError("cannot write report to " + out_path);
        out << text;
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------
// Shared CLI state
// ---------------------------------------------------------------------------

struct CommonConfig {
    std::string semigroup = "nat-add";
    std::vector<std::string> preds;
    bool skip_identity = false;
    std::string out_path;
};

void add_structure_flags(CLI::App* cmd, CommonConfig& c, bool many_preds) {
    cmd->add_option("--semigroup", c.semigroup,
                    "carrier: nat-add | nat-mul | free-word:LETTERS | inline JSON | @file")
        ->capture_default_str();
    auto* p = cmd->add_option("--pred", c.preds,
                              std::string(many_preds ? "[NAME=]SPEC (repeatable)" : "SPEC") +
                                  "; SPEC: mod:D:r1,r2,... | bitset:WINDOW:BASE64 | inline JSON | @file");
    p->required();
    if (!many_preds) p->expected(1);
    cmd->add_flag("--skip-identity", c.skip_identity, "exclude a two-sided identity from scans and witnesses");
    cmd->add_option("--out", c.out_path, "also write the report to this file");
}

int run_ip_find(const CommonConfig& common, std::size_t k, std::uint64_t window, bool quotient, bool distinct,
                std::uint64_t min_distinct_fp) {
    SemigroupHandle s = parse_semigroup(common.semigroup);
    auto preds = parse_predicates(common.preds, s);
    const SetPredicate& x = preds.front().second;
    SearchOptions opts{common.skip_identity};

    OracleVerdict verdict;
    if (quotient) {
        verdict = is_ip_quotient(x, k, opts);
    } else if (min_distinct_fp > 0) {
        verdict = iip_witness_bounded(s, x, k, min_distinct_fp, window, opts);
    } else if (distinct) {
        verdict = dip_witness_bounded(s, x, k, window, opts);
    } else {
        verdict = ip_witness_bounded(s, x, k, window, opts);
    }
    if (verdict.is_ip()) reverify_witness(s, x, *verdict.witness);

    json report{{"schema_version", 1}, {"command", "ip find"}};
    report["carrier"] = io::semigroup_to_json(s);
    report["mode"] = quotient ? "quotient-exact" : min_distinct_fp > 0 ? "bounded-distinct-products"
                                                 : distinct            ? "bounded-distinct-entries"
                                                                       : "bounded";
    report["verdict"] = io::verdict_to_json(verdict);
    if (verdict.is_ip()) {
        report["reverified"] = true;
        json display = json::array();
        for (Element e : verdict.witness->basis) display.push_back(s.display(e));
        report["basis_display"] = std::move(display);
    }
    write_report(report, common.out_path);
    return verdict.is_ip() ? exit_ok : verdict.is_not_ip_exact() ? exit_negative : exit_exhausted;
}

ForgeOptions build_forge_options(std::size_t stages, bool bounded, std::size_t k, std::uint64_t window,
                                 bool skip_identity, std::uint64_t scan_cap) {
    ForgeOptions opt;
    opt.mode = bounded ? OracleMode::Bounded : OracleMode::Exact;
    opt.stages = stages;
    opt.bounds = Bounds{k, window};
    opt.search = SearchOptions{skip_identity};
    opt.scan_cap = scan_cap;
    opt.claim_witness = true;
    return opt;
}

/// The forge requires its distinguished first predicate to be IP. Returns
/// nonzero exit code with a refusal report when that cannot be confirmed.
std::optional<int> refuse_unless_ip(const SemigroupHandle& s, const SetPredicate& x, const ForgeOptions& opt,
                                    const std::string& out_path) {
    OracleVerdict check = x.quotient() ? is_ip_quotient(x, 4, opt.search)
                                       : ip_witness_bounded(s, x, opt.bounds.depth, opt.bounds.window, opt.search);
    if (check.is_ip()) return std::nullopt;
    json report{{"schema_version", 1},
                {"command", "forge"},
                {"refusal", check.is_not_ip_exact() ? "the distinguished predicate is not an ip set"
                                                    : "could not confirm the distinguished predicate is ip "
                                                      "within the configured bounds"},
                {"verdict", io::verdict_to_json(check)}};
    write_report(report, out_path);
    return check.is_not_ip_exact() ? exit_negative : exit_exhausted;
}

int run_forge_cmd(const CommonConfig& common, std::size_t stages, bool bounded, std::size_t k,
                  std::uint64_t window, std::uint64_t scan_cap, const std::string& transcript_path,
                  const std::string& verify_path) {
    SemigroupHandle s = parse_semigroup(common.semigroup);
    auto preds = parse_predicates(common.preds, s);
    ForgeOptions opt = build_forge_options(stages, bounded, k, window, common.skip_identity, scan_cap);

    std::string expected;
    if (!verify_path.empty()) {
        // Replay: take the recorded options, rebuild the predicates from the
        // flags (the transcript stores predicate names only), rerun, compare.
        expected = slurp(verify_path);
        std::istringstream lines(expected);
        std::string header_line;
        if (!std::getline(lines, header_line)) throw UsageError("empty transcript: " + verify_path);
        json header = json::parse(header_line);
        if (header.at("format") != "forge-transcript") throw UsageError("not a forge transcript: " + verify_path);
        s = io::semigroup_from_json(header.at("carrier"));
        preds = parse_predicates(common.preds, s);
        const json& names = header.at("preds");
        if (names.size() != preds.size()) throw UsageError("transcript expects a different predicate count");
        for (std::size_t i = 0; i < preds.size(); ++i)
            if (names[i].get<std::string>() != preds[i].first)
                throw UsageError("transcript predicate name mismatch at position " + std::to_string(i));
        const json& o = header.at("options");
        opt = build_forge_options(o.at("stages").get<std::size_t>(), o.at("mode") == "bounded",
                                  o.at("bounds").at("k").get<std::size_t>(),
                                  o.at("bounds").at("N").get<std::uint64_t>(),
                                  o.at("skip_identity").get<bool>(), o.at("scan_cap").get<std::uint64_t>());
        opt.claim_witness = o.at("claim_witness").get<bool>();
        if (!o.at("pin_first").is_null()) opt.pin_first = io::formula_from_hex(o.at("pin_first").get<std::string>());
    }

    auto ctx = std::make_shared<const StructureContext>(s, preds);
    if (auto refusal = refuse_unless_ip(s, ctx->pred(0), opt, common.out_path)) return *refusal;

    // Step-wise run so the invariant sweep can be re-proved after each stage.
    ForgeState state = forge_init(ctx, opt);
    std::vector<StageRecord> records;
    json stage_reports = json::array();
    for (std::size_t i = 0; i < opt.stages; ++i) {
        records.push_back(state.step());
        check_forge_invariants(ForgeResult{state, records});
        const StageRecord& r = records.back();
        json line{{"stage", r.stage}, {"invariants", "ok"}};
        line["claim"] = r.claim ? json{{"u", r.claim->u.index}, {"v", r.claim->v.index}} : json(nullptr);
        stage_reports.push_back(std::move(line));
    }
    ForgeResult result{std::move(state), std::move(records)};
    std::string transcript = io::transcript_text(result);

    if (!verify_path.empty()) {
        io::ReplayOutcome outcome = io::transcript_matches(expected, result);
        json report{{"schema_version", 1},
                    {"command", "forge"},
                    {"verify", verify_path},
                    {"ok", outcome.ok},
                    {"message", outcome.message}};
        write_report(report, common.out_path);
        return outcome.ok ? exit_ok : exit_negative;
    }

    if (!transcript_path.empty()) {
        std::ofstream out(transcript_path);
        if (!out) throw UsageError("cannot write transcript to " + transcript_path);
        out << transcript;
    }

    json accepted = json::array(), rejected = json::array();
    for (std::size_t j = 0; j < result.state.psi_log().size(); ++j) {
        const PsiDecision& d = result.state.psi_log()[j];
        (d.accepted ? accepted : rejected)
            .push_back(json{{"index", j}, {"formula", display_formula(d.psi, *ctx)}});
    }
    json report{{"schema_version", 1}, {"command", "forge"}};
    report["carrier"] = io::semigroup_to_json(s);
    report["options"] = io::forge_options_to_json(opt);
    report["stages"] = std::move(stage_reports);
    report["accepted"] = std::move(accepted);
    report["rejected"] = std::move(rejected);
    report["transcript_lines"] = opt.stages + 1;
    if (!transcript_path.empty()) report["transcript"] = transcript_path;
    write_report(report, common.out_path);
    return exit_ok;
}

int run_extract(const CommonConfig& common, const std::string& oracle_kind, std::size_t depth,
                std::uint32_t idempotent_class, bool distinct, std::size_t stages, bool bounded, std::size_t k,
                std::uint64_t window, std::uint64_t scan_cap) {
    SemigroupHandle s = parse_semigroup(common.semigroup);
    auto preds = parse_predicates(common.preds, s);
    auto ctx = std::make_shared<const StructureContext>(s, preds);
    SearchOptions opts{common.skip_identity};

    json report{{"schema_version", 1}, {"command", "extract"}, {"oracle", oracle_kind}};
    ExtractionResult extraction;
    Formula target = Formula::atom(preds.size() >= 2 ? 1 : 0, {TermLetter::x()});
    std::optional<Formula> complement_base;
    if (preds.size() >= 2) complement_base = Formula::atom(0, {TermLetter::x()});

    if (oracle_kind == "quotient") {
        TypeOracle oracle = TypeOracle::quotient_idempotent_type(ctx, idempotent_class, opts, distinct);
        extraction = extract_basis(oracle, target, complement_base, depth);
    } else if (oracle_kind == "forge") {
        ForgeOptions fopt = build_forge_options(stages, bounded, k, window, common.skip_identity, scan_cap);
        if (auto refusal = refuse_unless_ip(s, ctx->pred(0), fopt, common.out_path)) return *refusal;
        ForgeResult run = run_forge(ctx, fopt);
        TypeOracle oracle = TypeOracle::from_forge(run.state);
        extraction = extract_basis(oracle, target, complement_base, depth);
    } else if (oracle_kind == "partition") {
        if (preds.size() != 2) throw UsageError("--oracle partition needs exactly two predicates");
        ForgeOptions fopt = build_forge_options(stages, bounded, k, window, common.skip_identity, scan_cap);
        if (auto refusal = refuse_unless_ip(s, ctx->pred(0), fopt, common.out_path)) return *refusal;
        PartitionViaTypesResult r = partition_via_types(ctx, depth, fopt, distinct);
        extraction = std::move(r.extraction);
        report["side"] = r.y_side ? ctx->pred_name(1) : ctx->pred_name(0) + " minus " + ctx->pred_name(1);
    } else {
        throw UsageError("--oracle must be quotient, forge, or partition");
    }

    // Independent certificate check: evaluate the verified side on every
    // product directly (never through the oracle).
    Formula side = extraction.renamed && complement_base
                       ? Formula::conj(*complement_base, Formula::negate(target))
                       : target;
    BasisCheck check = verify_basis(*ctx, side, extraction.basis);
    bool sound = check.ok && extraction.verified;

    report.update(io::extraction_to_json(extraction, *ctx));
    report["reverified"] = sound;
    write_report(report, common.out_path);
    if (extraction.truncated_at) return exit_truncated;
    return sound ? exit_ok : exit_negative;
}

int run_window(unsigned colors, unsigned depth, std::size_t n_max, const std::string& out_path) {
    WindowResult w = hindman_window(colors, depth, n_max);
    json report{{"schema_version", 1}, {"command", "hindman-window"}};
    report.update(io::window_to_json(w));
    if (w.found) {
        if (coloring_has_mono_sums(depth, w.certificate))
            throw std::logic_error("certificate coloring fails independent re-verification");
        report["reverified"] = true;
    }
    write_report(report, out_path);
    return w.found ? exit_ok : exit_exhausted;
}

} // namespace

int main(int argc, char** argv) {
    if (const char* raw = std::getenv("HINDMAN_FORGE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(raw, &end, 10);
        if (raw == end || *end != '\0' || v < 1) {
            std::cerr << "HINDMAN_FORGE_THREADS must be a positive integer, got \"" << raw << "\"\n";
            return exit_usage;
        }
        // All computations are sequential; any positive cap is honored.
    }

    CLI::App app{"workbench for ip sets, idempotent types, and finite products over countable semigroups"};
    app.require_subcommand(1);

    // ip find
    CLI::App* ip = app.add_subcommand("ip", "ip-set oracles");
    ip->require_subcommand(1);
    CLI::App* find = ip->add_subcommand("find", "search for an ip witness or decide exactly");
    CommonConfig find_cfg;
    std::size_t find_k = 4;
    std::uint64_t find_window = 64;
    bool find_quotient = false, find_distinct = false;
    std::uint64_t find_min_distinct = 0;
    add_structure_flags(find, find_cfg, false);
    find->add_option("--k", find_k, "basis length to search for")->capture_default_str();
    find->add_option("--N", find_window, "carrier window for bounded search")->capture_default_str();
    find->add_flag("--quotient", find_quotient, "decide exactly through the predicate's quotient");
    find->add_flag("--distinct", find_distinct, "require pairwise distinct basis entries");
    find->add_option("--min-distinct-fp", find_min_distinct,
                     "require at least this many distinct finite products (implies --distinct)");

    // forge
    CLI::App* forge = app.add_subcommand("forge", "run the stagewise type forge");
    CommonConfig forge_cfg;
    std::size_t forge_stages = 4, forge_k = 4;
    std::uint64_t forge_window = 64, forge_scan_cap = 1u << 16;
    bool forge_bounded = false;
    std::string transcript_path, verify_path;
    add_structure_flags(forge, forge_cfg, true);
    forge->add_option("--stages", forge_stages, "number of one-variable decisions")->capture_default_str();
    forge->add_flag("--bounded", forge_bounded, "bounded witness search instead of exact class reasoning");
    forge->add_option("--k", forge_k, "bounded-mode search depth")->capture_default_str();
    forge->add_option("--N", forge_window, "bounded-mode search window")->capture_default_str();
    forge->add_option("--scan-cap", forge_scan_cap, "element scan ceiling")->capture_default_str();
    forge->add_option("--transcript", transcript_path, "write the JSON-lines transcript to this file");
    forge->add_option("--verify", verify_path,
                      "replay a transcript with the same predicates and require a byte-identical rerun");

    // extract
    CLI::App* extract = app.add_subcommand("extract", "extract a finite-products basis from a type oracle");
    CommonConfig extract_cfg;
    std::string oracle_kind = "quotient";
    std::size_t extract_depth = 4, extract_stages = 4, extract_k = 4;
    std::uint64_t extract_window = 64, extract_scan_cap = 1u << 16;
    std::uint32_t extract_class = 0;
    bool extract_distinct = false, extract_bounded = false;
    add_structure_flags(extract, extract_cfg, true);
    extract->add_option("--oracle", oracle_kind, "oracle source: quotient | forge | partition")
        ->capture_default_str();
    extract->add_option("--depth", extract_depth, "basis length to extract")->capture_default_str();
    extract->add_option("--class", extract_class, "idempotent class for the quotient oracle")
        ->capture_default_str();
    extract->add_flag("--distinct", extract_distinct, "strictly increasing witnesses");
    extract->add_option("--stages", extract_stages, "forge stages for forge/partition oracles")
        ->capture_default_str();
    extract->add_flag("--bounded", extract_bounded, "bounded forge mode");
    extract->add_option("--k", extract_k, "bounded-mode search depth")->capture_default_str();
    extract->add_option("--N", extract_window, "bounded-mode search window")->capture_default_str();
    extract->add_option("--scan-cap", extract_scan_cap, "element scan ceiling")->capture_default_str();

    // hindman-window
    CLI::App* window = app.add_subcommand("hindman-window", "least finite window with unavoidable mono sums");
    unsigned win_colors = 2, win_depth = 2;
    std::size_t win_n_max = 64;
    std::string win_out;
    window->add_option("--colors", win_colors, "number of colors")->capture_default_str();
    window->add_option("--depth", win_depth, "length of the sum-generating sequence")->capture_default_str();
    window->add_option("--n-max", win_n_max, "largest window to try")->capture_default_str();
    window->add_option("--out", win_out, "also write the report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (find->parsed()) {
            return run_ip_find(find_cfg, find_k, find_window, find_quotient, find_distinct, find_min_distinct);
        }
        if (forge->parsed()) {
            return run_forge_cmd(forge_cfg, forge_stages, forge_bounded, forge_k, forge_window, forge_scan_cap,
                                 transcript_path, verify_path);
        }
        if (extract->parsed()) {
            return run_extract(extract_cfg, oracle_kind, extract_depth, extract_class, extract_distinct,
                               extract_stages, extract_bounded, extract_k, extract_window, extract_scan_cap);
        }
        if (window->parsed()) {
            return run_window(win_colors, win_depth, win_n_max, win_out);
        }
    } catch (const UsageError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_usage;
    } catch (const json::exception& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return exit_negative;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_negative;
    }
    return exit_usage;
}
