#include "CLI11.hpp"
#include "json.hpp"

#include "lplat/analysis.hpp"
#include "lplat/product.hpp"
#include "lplat/random_gen.hpp"
#include "lplat/sysfile.hpp"

#include <iostream>
#include <random>

using namespace lplat;
using nlohmann::json;

namespace {

std::string rat_text(const Rat& r) { return Scalar(r).text(); }

json value_json(const Value& v) {
    if (const auto* s = std::get_if<Scalar>(&v)) return s->text();
    const auto& e = std::get<Enclosure>(v);
    return json::array({rat_text(e.lo), rat_text(e.hi)});
}

json intervals_json(const IntervalSet& s) {
    json out = json::array();
    for (const auto& iv : s.intervals()) out.push_back({iv.lo.text(), iv.hi.text()});
    return out;
}

void emit(const json& rec) { std::cout << rec.dump() << "\n"; }

InducedAut make_aut(const SystemDesc& sys) { return InducedAut(sys.map, sys.mu, sys.p); }

Rat parse_rat(const std::string& s) { return parse_scalar(s, nullptr).as_rational(); }

// The quantifier-free pool used by the transport experiment.
const std::vector<std::string> kTransportPool = {
    "norm(x)",
    "norm(add(s(x), neg(x)))",
    "monus(norm(join(x, s(x))), norm(meet(x, s^-1(x))))",
    "rabs(norm(abs(x)) - norm(avg(x, s^2(x))))",
    "max(norm(pos(x)), min(norm(negpart(x)), norm(restrict(x, s(x)))))",
};

int run_axioms(const std::string& file, std::vector<int> ns, int depth, const std::string& eps) {
    SystemDesc sys = load_system(file);
    AxiomReport rep = axiom_suite(make_aut(sys), depth, ns, parse_rat(eps));
    for (const auto& e : rep.entries)
        emit({{"experiment", "axioms"},
              {"system", file},
              {"name", e.name},
              {"value", e.value.text()},
              {"pass", e.pass},
              {"note", e.note}});
    return rep.all_pass ? 0 : 1;
}

int run_rokhlin(const std::string& file, int n, const std::string& eps, const std::string& f_lit) {
    SystemDesc sys = load_system(file);
    InducedAut A = make_aut(sys);
    StepFunction f = f_lit.empty() ? StepFunction::indicator(Scalar(0), Scalar(1))
                                   : parse_step(f_lit, sys.alpha);
    TowerResult t = functional_rokhlin(A, f, n, parse_rat(eps));
    emit({{"experiment", "rokhlin"},
          {"system", file},
          {"n", n},
          {"eps", eps},
          {"g", t.g.text()},
          {"h", t.h.text()},
          {"overlap", t.overlap.text()},
          {"deficiency", t.deficiency.text()},
          {"g_norm", t.g_norm.text()},
          {"h_norm", t.h_norm.text()}});
    return 0;  // functional_rokhlin throws when a certificate fails
}

int run_tower(const std::string& file, int n, const std::string& eps) {
    SystemDesc sys = load_system(file);
    IntervalSet base = set_tower(sys.map, n, parse_rat(eps));
    IntervalSet covered;
    for (int i = 0; i < n; ++i) covered = covered.unite(sys.map.power(i).image(base));
    Scalar leak = sys.mu.total_mass() - sys.mu.mass(covered);
    emit({{"experiment", "tower"},
          {"system", file},
          {"n", n},
          {"eps", eps},
          {"base", intervals_json(base)},
          {"leak", leak.text()}});
    return leak < Scalar(parse_rat(eps)) ? 0 : 1;
}

int run_classify(const std::string& file, int depth, int n_max, bool printed) {
    SystemDesc sys = load_system(file);
    KindBounds b;
    b.depth = depth;
    b.n_max = n_max;
    b.printed_ergodic_reading = printed;
    KindVerdict v = kind_classify(make_aut(sys), b);
    const char* names[] = {"II_1", "II_inf", "III_evidence", "undetermined"};
    json rec{{"experiment", "classify"},
             {"system", file},
             {"verdict", names[static_cast<int>(v.verdict)]},
             {"evidence", v.evidence}};
    if (v.fixed_point) rec["fixed_point"] = v.fixed_point->text();
    if (v.autocompatible) rec["autocompatible"] = v.autocompatible->text();
    if (v.wandering_set) {
        rec["wandering_set"] = intervals_json(*v.wandering_set);
        rec["wandering_indices"] = v.wandering_indices;
    }
    emit(rec);
    return 0;
}

int run_separation(const std::string& a, const std::string& b, const std::string& eps,
                   long n_max) {
    SeparationResult r = rotation_separation(parse_alpha(a), parse_alpha(b), parse_rat(eps), n_max);
    json rec{{"experiment", "separation"}, {"alpha", a}, {"beta", b}, {"eps", eps}};
    if (r.found) {
        rec["n"] = r.n;
        rec["bound"] = r.bound.text();
        rec["dist_alpha_to_Z"] = r.dist_alpha.text();
        rec["dist_beta_to_Z_half"] = r.dist_beta.text();
    } else {
        rec["diagnostic"] = "search exhausted: no n within the bound meets both conditions";
    }
    emit(rec);
    return 0;
}

int run_weakdist(const std::string& f1, const std::string& f2, int depth) {
    SystemDesc a = load_system(f1), b = load_system(f2);
    Scalar d = weak_distance(make_aut(a), make_aut(b), depth);
    emit({{"experiment", "weakdist"},
          {"system1", f1},
          {"system2", f2},
          {"depth", depth},
          {"value", d.text()}});
    return 0;
}

int run_transport(const std::string& file, int count, std::uint64_t seed) {
    SystemDesc sys = load_system(file);
    if (sys.map.space().kind != SpaceKind::Unit)
        throw error("transport: randomized conjugators are generated on the unit interval");
    InducedAut sigma = make_aut(sys);
    std::mt19937_64 rng(seed);
    int failures = 0;
    for (int t = 0; t < count; ++t) {
        const std::string& src = kTransportPool[t % kTransportPool.size()];
        FormulaPtr phi = parse_formula(src);
        PAMap f = random_pamap(rng);
        StepFunction u = random_step(rng);
        bool ok = conjugation_transport_check(*phi, f, sigma, u);
        if (!ok) ++failures;
        emit({{"experiment", "transport"},
              {"system", file},
              {"trial", t},
              {"phi", src},
              {"pass", ok}});
    }
    return failures == 0 ? 0 : 1;
}

int run_membership(const std::string& file, int n_max, int m_max, int depth) {
    SystemDesc sys = load_system(file);
    SearchStrategy grid;
    grid.depth = depth;
    grid.grid = {Rat(1), Rat(1, 2), Rat(1, 4), Rat(1, 5), Rat(2)};
    MembershipReport rep = aperiodic_membership(make_aut(sys), n_max, m_max, grid);
    for (const auto& c : rep.cells)
        emit({{"experiment", "membership"},
              {"system", file},
              {"n", c.n},
              {"u", c.u_text},
              {"m", c.m},
              {"witnessed", c.witnessed},
              {"value", c.value.text()},
              {"note", c.note}});
    emit({{"experiment", "membership"}, {"system", file}, {"all_witnessed", rep.all_witnessed}});
    return 0;
}

int run_dirichlet(const std::string& a, int count) {
    std::vector<Int> qs = dirichlet_sequence(parse_alpha(a), count);
    json arr = json::array();
    for (const Int& q : qs) arr.push_back(q.str());
    emit({{"experiment", "dirichlet"}, {"alpha", a}, {"denominators", arr}});
    return 0;
}

int run_embed(const std::string& file, int count, std::uint64_t seed) {
    SystemDesc sys = load_system(file);
    if (sys.map.space().kind != SpaceKind::Unit)
        throw error("embed: the skew product is built over the unit interval");
    AlphaRef a = sys.alpha ? sys.alpha : AlphaSpec::golden();
    ProductSystem prod(sys.map, Scalar::alpha(a), sys.mu);
    InducedAut A = make_aut(sys);
    std::mt19937_64 rng(seed);
    int failures = 0;
    for (int t = 0; t < count; ++t) {
        StepFunction u = random_step(rng);
        bool ok = prod.apply(prod.lift(u)) == prod.lift(A.apply(u));
        if (!ok) ++failures;
        emit({{"experiment", "embed"}, {"system", file}, {"trial", t}, {"commutes", ok}});
    }
    AperiodicityReport rep = prod.aperiodicity(10);
    emit({{"experiment", "embed"},
          {"system", file},
          {"aperiodic_up_to_10", rep.aperiodic_up_to(10)},
          {"certificate", rep.certificate}});
    return failures == 0 && rep.aperiodic_up_to(10) ? 0 : 1;
}

int run_eval(const std::string& file, const std::string& formula_src,
             const std::vector<std::string>& assigns, int depth) {
    SystemDesc sys = load_system(file);
    InducedAut A = make_aut(sys);
    FormulaPtr phi = parse_formula(formula_src);
    Valuation val;
    for (const std::string& kv : assigns) {
        auto pos = kv.find('=');
        if (pos == std::string::npos) throw error("--assign expects var=step{...}");
        val.emplace(kv.substr(0, pos), parse_step(kv.substr(pos + 1), sys.alpha));
    }
    json rec{{"experiment", "eval"}, {"system", file}, {"formula", pretty(*phi)}};
    std::set<std::string> fv = phi->free_vars();
    bool all_bound = true;
    for (const auto& v : fv) all_bound = all_bound && val.count(v) > 0;
    if (all_bound && !fv.empty()) {
        rec["value"] = value_json(eval_qf(*phi, A, val));
        rec["kind"] = "exact";
    } else if (fv.empty()) {
        SearchStrategy st;
        st.depth = depth;
        BoundedValue bv = eval_quantified(*phi, A, st);
        rec["value"] = value_json(bv.value);
        rec["kind"] = bv.kind == BoundedValue::Kind::Exact ? "exact"
                      : bv.kind == BoundedValue::Kind::LowerBound ? "lower_bound"
                                                                  : "upper_bound";
        if (!bv.witness.empty()) rec["witness"] = bv.witness;
    } else {
        throw error("eval: free variables left unassigned");
    }
    emit(rec);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact workbench for L^p lattices with a distinguished automorphism"};
    app.require_subcommand(1);

    std::string system, system2, alpha, beta, eps = "1/20", f_lit, formula;
    std::vector<std::string> assigns;
    std::vector<int> ns{2};
    int n = 2, depth = 3, n_max = 6, m_max = 3, count = 20;
    long sep_max = 1000000;
    std::uint64_t seed = 0;
    bool printed = false;

    auto* axioms = app.add_subcommand("axioms", "axiom matrices and Rokhlin axioms");
    axioms->add_option("--system", system)->required();
    axioms->add_option("--n", ns)->delimiter(',');
    axioms->add_option("--depth", depth);
    axioms->add_option("--eps", eps);

    auto* rokhlin = app.add_subcommand("rokhlin", "functional tower splitting");
    rokhlin->add_option("--system", system)->required();
    rokhlin->add_option("--n", n)->required();
    rokhlin->add_option("--eps", eps);
    rokhlin->add_option("--f", f_lit);

    auto* tower = app.add_subcommand("tower", "set-level tower base");
    tower->add_option("--system", system)->required();
    tower->add_option("--n", n)->required();
    tower->add_option("--eps", eps);

    auto* classify = app.add_subcommand("classify", "ergodic kind classification");
    classify->add_option("--system", system)->required();
    classify->add_option("--depth", depth);
    classify->add_option("--nmax", n_max);
    classify->add_flag("--printed-ergodic", printed,
                       "use the printed (disjointness) ergodicity reading");

    auto* separation = app.add_subcommand("separation", "rotation type separation");
    separation->add_option("--alpha", alpha)->required();
    separation->add_option("--beta", beta)->required();
    separation->add_option("--eps", eps);
    separation->add_option("--nmax", sep_max);

    auto* weakdist = app.add_subcommand("weakdist", "weak-topology distance");
    weakdist->add_option("--system1", system)->required();
    weakdist->add_option("--system2", system2)->required();
    weakdist->add_option("--depth", depth);

    auto* transport = app.add_subcommand("transport", "conjugation transport identity");
    transport->add_option("--system", system)->required();
    transport->add_option("--count", count);
    transport->add_option("--seed", seed);

    auto* membership = app.add_subcommand("membership", "aperiodicity G-delta cells");
    membership->add_option("--system", system)->required();
    membership->add_option("--nmax", n_max);
    membership->add_option("--mmax", m_max);
    membership->add_option("--depth", depth);

    auto* dirichlet = app.add_subcommand("dirichlet", "approximation denominators");
    dirichlet->add_option("--alpha", alpha)->required();
    dirichlet->add_option("--count", count);

    auto* embed = app.add_subcommand("embed", "skew-product embedding check");
    embed->add_option("--system", system)->required();
    embed->add_option("--count", count);
    embed->add_option("--seed", seed);

    auto* eval = app.add_subcommand("eval", "evaluate a formula in a system");
    eval->add_option("--system", system)->required();
    eval->add_option("--formula", formula)->required();
    eval->add_option("--assign", assigns);
    eval->add_option("--depth", depth);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(axioms)) return run_axioms(system, ns, depth, eps);
        if (app.got_subcommand(rokhlin)) return run_rokhlin(system, n, eps, f_lit);
        if (app.got_subcommand(tower)) return run_tower(system, n, eps);
        if (app.got_subcommand(classify)) return run_classify(system, depth, n_max, printed);
        if (app.got_subcommand(separation)) return run_separation(alpha, beta, eps, sep_max);
        if (app.got_subcommand(weakdist)) return run_weakdist(system, system2, depth);
        if (app.got_subcommand(transport)) return run_transport(system, count, seed);
        if (app.got_subcommand(membership)) return run_membership(system, n_max, m_max, depth);
        if (app.got_subcommand(dirichlet)) return run_dirichlet(alpha, count);
        if (app.got_subcommand(embed)) return run_embed(system, count, seed);
        if (app.got_subcommand(eval)) return run_eval(system, formula, assigns, depth);
    } catch (const std::exception& e) {
        emit({{"error", e.what()}});
        return 2;
    }
    return 0;
}
