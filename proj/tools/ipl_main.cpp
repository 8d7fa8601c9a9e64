// Command-line front end for the decision procedure.
//
//   ipl decide <formula> [--trace] [--oracle] [--embed] [--format text|json]
//   ipl normalize <formula>
//   ipl algebra <k> [--budget N]
//   ipl check-model <formula> <algebra> <var=element>...
//
// Exit codes: 0 provable / model valid, 1 unprovable / model invalid,
// 2 usage or parse errors.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ipl/decide.hpp"
#include "ipl/oracle.hpp"

namespace {

using nlohmann::json;

ipl::Formula parse_or_exit(const std::string& text) {
    try {
        return ipl::parse(text);
    } catch (const ipl::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::exit(2);
    }
}

json assignment_json(const ipl::Interpretation& interp) {
    json out = json::object();
    for (const auto& [var, elem] : interp.assignment) out[var] = elem.text();
    return out;
}

void print_assignment(const ipl::Interpretation& interp) {
    for (const auto& [var, elem] : interp.assignment)
        std::cout << "  " << var << " = " << elem.text() << "\n";
}

int cmd_decide(const std::string& formula_text, bool trace, bool oracle, bool embed,
               const std::string& format) {
    ipl::Formula f = parse_or_exit(formula_text);
    ipl::RegularizationResult reg = ipl::regularize(f);
    ipl::Measure m = ipl::measure_parts(reg.goal);
    ipl::Verdict verdict = ipl::decide(f);

    bool oracle_provable = false;
    if (oracle) oracle_provable = ipl::g4ip_provable(f);
    const bool agrees = !oracle || oracle_provable == verdict.is_provable();
    if (oracle && !agrees)
        std::cerr << "warning: oracle disagrees (decide: " << (verdict.is_provable() ? "provable" : "unprovable")
                  << ", oracle: " << (oracle_provable ? "provable" : "unprovable") << ")\n";

    std::optional<ipl::CounterModel> embedded;
    if (embed && !verdict.is_provable()) embedded = ipl::restate_in_jaskowski(verdict.model());

    if (format == "json") {
        json out;
        out["formula"] = ipl::render(f);
        out["verdict"] = verdict.is_provable() ? "provable" : "refuted";
        out["goal"] = reg.goal.text();
        out["degrees"] = {{"c", m.connectives}, {"d", m.degree}, {"v", m.variables}, {"s", m.s()}};
        if (!verdict.is_provable()) {
            const auto& model = verdict.model();
            out["algebra"] = model.algebra().text();
            out["assignment"] = assignment_json(model.interpretation);
            out["value"] = model.value.text();
        }
        if (embedded) {
            out["embedded"] = {{"algebra", embedded->algebra().text()},
                               {"assignment", assignment_json(embedded->interpretation)},
                               {"value", embedded->value.text()}};
        }
        if (oracle) out["oracle"] = {{"provable", oracle_provable}, {"agrees", agrees}};
        if (trace) out["trace"] = ipl::render_trace(verdict.trace());
        std::cout << out.dump(2) << "\n";
    } else {
        if (verdict.is_provable()) {
            std::cout << "PROVABLE\n";
        } else {
            const auto& model = verdict.model();
            std::cout << "UNPROVABLE\n";
            std::cout << "algebra: " << model.algebra().text() << "\n";
            print_assignment(model.interpretation);
            std::cout << "value: " << model.value.text() << "\n";
            if (embedded) {
                std::cout << "restated in J_" << ipl::jaskowski_level(embedded->algebra()) << " = "
                          << embedded->algebra().text() << "\n";
                print_assignment(embedded->interpretation);
                std::cout << "value: " << embedded->value.text() << "\n";
            }
        }
        if (oracle)
            std::cout << "oracle: " << (oracle_provable ? "provable" : "unprovable")
                      << (agrees ? " (agrees)" : " (DISAGREES)") << "\n";
        if (trace) std::cout << "trace:\n" << ipl::render_trace(verdict.trace());
    }
    return verdict.is_provable() ? 0 : 1;
}

int cmd_normalize(const std::string& formula_text) {
    ipl::Formula f = parse_or_exit(formula_text);
    ipl::Formula reduced = ipl::reduce(f);
    ipl::RegularizationResult reg = ipl::regularize(f);
    ipl::Measure m = ipl::measure_parts(reg.goal);
    std::cout << "input:   " << ipl::render(f) << "\n";
    std::cout << "reduced: " << ipl::render(reduced) << "\n";
    std::cout << "goal:    " << reg.goal.text() << "\n";
    if (!reg.fresh_table.empty()) {
        std::cout << "fresh variables:\n";
        for (const auto& [name, sub] : reg.fresh_table)
            std::cout << "  " << name << " = " << ipl::render(sub) << "\n";
    }
    std::cout << "degrees: c=" << m.connectives << " d=" << m.degree << " v=" << m.variables
              << " s=" << m.s() << "\n";
    return 0;
}

int cmd_algebra(unsigned k, std::uint64_t budget) {
    ipl::HeytingAlgebra h = ipl::jaskowski(k);
    std::cout << "J_" << k << " = " << h.text() << "\n";
    std::cout << "cardinality: " << h.cardinality() << "\n";
    const std::uint64_t card = h.cardinality();
    if (card > budget || 3 * card * card > budget) {
        std::cout << "operation tables omitted: " << card << " elements need " << 3 * card * card
                  << " table entries, budget is " << budget << "\n";
        return 0;
    }
    std::vector<ipl::Element> elems = ipl::enumerate_elements(h, budget);
    std::cout << "elements:\n";
    for (std::size_t i = 0; i < elems.size(); ++i)
        std::cout << "  e" << i << " = " << elems[i].text() << "\n";
    auto print_table = [&](const char* name, ipl::Op op) {
        std::cout << name << ":\n";
        for (std::size_t i = 0; i < elems.size(); ++i) {
            std::cout << " ";
            for (std::size_t j = 0; j < elems.size(); ++j) {
                std::size_t idx = 0;
                ipl::Element r = ipl::operate(h, op, elems[i], elems[j]);
                while (idx < elems.size() && elems[idx] != r) ++idx;
                std::cout << " e" << idx;
            }
            std::cout << "\n";
        }
    };
    print_table("meet", ipl::Op::Meet);
    print_table("join", ipl::Op::Join);
    print_table("impl", ipl::Op::Impl);
    return 0;
}

int cmd_check_model(const std::string& formula_text, const std::string& algebra_text,
                    const std::vector<std::string>& bindings) {
    ipl::Formula f = parse_or_exit(formula_text);
    ipl::Interpretation interp = [&] {
        try {
            ipl::Interpretation i{ipl::parse_algebra(algebra_text), {}};
            for (const auto& binding : bindings) {
                auto eq = binding.find('=');
                if (eq == std::string::npos)
                    throw ipl::ParseError(1, "binding must look like VAR=ELEMENT: " + binding);
                i.assignment.insert_or_assign(binding.substr(0, eq),
                                              ipl::parse_element(binding.substr(eq + 1)));
            }
            return i;
        } catch (const ipl::ParseError& e) {
            std::cerr << "error: " << e.what() << "\n";
            std::exit(2);
        }
    }();

    for (const auto& [var, elem] : interp.assignment) {
        if (!ipl::well_formed(interp.algebra, elem)) {
            std::cout << "INVALID: " << elem.text() << " is not an element of " << interp.algebra.text()
                      << "\n";
            return 1;
        }
    }
    try {
        ipl::Element value = ipl::evaluate(interp, f);
        std::cout << "value: " << value.text() << "\n";
        if (value == ipl::top_of(interp.algebra)) {
            std::cout << "INVALID: formula evaluates to top, not a counter-model\n";
            return 1;
        }
        std::cout << "VALID counter-model\n";
        return 0;
    } catch (const ipl::EvalError& e) {
        std::cout << "INVALID: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decision procedure for intuitionistic propositional logic with "
                 "finite Heyting-algebra counter-models"};
    app.require_subcommand(1);

    std::string formula_text, algebra_text, format = "text";
    bool trace = false, oracle = false, embed = false;
    unsigned level = 0;
    std::uint64_t budget = ipl::kDefaultBudget;
    std::vector<std::string> bindings;

    CLI::App* decide = app.add_subcommand("decide", "decide a formula");
    decide->add_option("formula", formula_text, "formula to decide")->required();
    decide->add_flag("--trace", trace, "print the exploration trace");
    decide->add_flag("--oracle", oracle, "cross-check against the sequent-calculus oracle");
    decide->add_flag("--embed", embed, "restate the counter-model inside a Jaskowski algebra");
    decide->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

    CLI::App* normalize = app.add_subcommand("normalize", "show the reduced form and regular goal");
    normalize->add_option("formula", formula_text, "formula to normalize")->required();

    CLI::App* algebra = app.add_subcommand("algebra", "print a Jaskowski algebra");
    algebra->add_option("k", level, "index into the sequence J_0, J_1, ...")->required();
    algebra->add_option("--budget", budget, "step budget for table printing");

    CLI::App* check = app.add_subcommand("check-model", "evaluate a candidate counter-model");
    check->add_option("formula", formula_text, "formula the model should refute")->required();
    check->add_option("algebra", algebra_text, "algebra, e.g. G(P(B))")->required();
    check->add_option("bindings", bindings, "assignments, e.g. P=* Q=old((f))");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(decide)) return cmd_decide(formula_text, trace, oracle, embed, format);
        if (app.got_subcommand(normalize)) return cmd_normalize(formula_text);
        if (app.got_subcommand(algebra)) return cmd_algebra(level, budget);
        if (app.got_subcommand(check)) return cmd_check_model(formula_text, algebra_text, bindings);
    } catch (const ipl::BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
