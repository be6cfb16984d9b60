#include "futs/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "futs/bisim.hpp"
#include "futs/crosscheck.hpp"
#include "futs/futs_model.hpp"
#include "futs/syntax.hpp"

namespace futs::cli {

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_json(const std::string& path) { return path.size() >= 5 && path.substr(path.size() - 5) == ".json"; }

Model load_model(const std::string& path, const std::string& lang_flag) {
    Lang lang;
    if (!lang_flag.empty()) {
        lang = parse_lang(lang_flag);
    } else if (auto l = lang_from_path(path)) {
        lang = *l;
    } else {
        throw InputError("cannot tell the language of " + path + "; pass --lang");
    }
    Model m = parse_model(lang, slurp(path));
    auto g = check_guarded(m);
    if (!g.ok) throw InputError(g.message);
    return m;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty() || out_path == "-") {
        out << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw InputError("cannot write " + out_path);
    f << text;
}

std::size_t state_by_key(const FutsModel& f, const std::string& key) {
    auto id = f.id_of(key);
    if (id == kNoBlock) throw InputError("no state named " + key);
    return id;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"FuTS workbench for PEPA, IML, TPC and MAL models", "futs"};
    app.require_subcommand(1);

    std::string file, lang, format = "json", out_path, left, right;
    std::size_t max_states = kDefaultMaxStates;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("file", file, "model file (.pepa .iml .tpc .mal)")->required();
        sub->add_option("--lang", lang, "language, overriding the file extension");
    };
    auto* check = app.add_subcommand("check", "parse a model and check guardedness");
    add_common(check);
    auto* build = app.add_subcommand("build", "explore a model and export it");
    add_common(build);
    build->add_option("--max-states", max_states, "exploration bound")->check(CLI::PositiveNumber);
    build->add_option("--format", format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
    build->add_option("-o,--output", out_path, "output file");
    auto* bisim = app.add_subcommand("bisim", "decide bisimilarity of two terms or two states");
    bisim->add_option("file", file, "model file, or an explored model as .json")->required();
    bisim->add_option("--lang", lang, "language, overriding the file extension");
    bisim->add_option("--left", left, "first term (or state key for .json input)")->required();
    bisim->add_option("--right", right, "second term (or state key for .json input)")->required();
    bisim->add_option("--max-states", max_states, "exploration bound")->check(CLI::PositiveNumber);
    auto* minimize_cmd = app.add_subcommand("minimize", "quotient by bisimilarity");
    minimize_cmd->add_option("file", file, "model file, or an explored model as .json")->required();
    minimize_cmd->add_option("--lang", lang, "language, overriding the file extension");
    minimize_cmd->add_option("--max-states", max_states, "exploration bound")->check(CLI::PositiveNumber);
    minimize_cmd->add_option("-o,--output", out_path, "output file");
    auto* compare = app.add_subcommand("compare", "cross-check the FuTS semantics against the SOS semantics");
    add_common(compare);
    compare->add_option("--max-states", max_states, "exploration bound")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "futs: " << e.what() << "\n";
        return 2;
    }

    try {
        if (check->parsed()) {
            Model m = load_model(file, lang);
            auto acts = alphabet(m);
            out << "OK " << lang_name(m.lang) << ": " << m.env.size() << " constants, " << acts.size() << " actions\n";
            return 0;
        }
        if (build->parsed()) {
            Model m = load_model(file, lang);
            auto f = explore(m, max_states);
            emit(serialize(f, format == "dot" ? Format::Dot : Format::Json), out_path, out);
            return 0;
        }
        if (bisim->parsed()) {
            FutsModel f;
            std::size_t s1, s2;
            if (is_json(file)) {
                f = deserialize(slurp(file));
                s1 = state_by_key(f, left);
                s2 = state_by_key(f, right);
            } else {
                Model m = load_model(file, lang);
                auto l = parse_term(m.lang, left, m.env);
                auto r = parse_term(m.lang, right, m.env);
                f = explore(m, {l, r}, max_states);
                s1 = f.id_of(l->key);
                s2 = f.id_of(r->key);
            }
            auto w = distinguish(f, s1, s2);
            if (!w) {
                out << "BISIMILAR\n";
                return 0;
            }
            out << "NOT BISIMILAR\n";
            out << "witness: label " << w->label << ", block " << w->block << ": " << w->left << " vs " << w->right
                << "\n";
            return 1;
        }
        if (minimize_cmd->parsed()) {
            FutsModel f = is_json(file) ? deserialize(slurp(file)) : explore(load_model(file, lang), max_states);
            auto q = minimize(f, refine(f));
            emit(serialize(q, Format::Json), out_path, out);
            return 0;
        }
        if (compare->parsed()) {
            Model m = load_model(file, lang);
            auto f = explore(m, max_states);
            bool all = true;
            for (const auto& r : cross_check(m, f)) {
                all = all && r.passed;
                out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.checked << " checked)";
                if (!r.passed) out << ": " << r.detail;
                out << "\n";
            }
            out << (all ? "all checks passed" : "some checks failed") << " on " << f.size() << " states\n";
            return all ? 0 : 1;
        }
    } catch (const ParseError& e) {
        err << "futs: " << file << ":" << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "futs: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace futs::cli
