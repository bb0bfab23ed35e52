#include "polyeis/eisenstein.hpp"
#include "polyeis/horospherical.hpp"
#include "polyeis/numerics.hpp"
#include "polyeis/zeta.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <boost/crc.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace polyeis;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kArtifactVersion = "0.1.0";
constexpr int kSchemaVersion = 1;
constexpr const char* kCacheEnv = "POLYEIS_CACHE_DIR";

struct Config {
    long D = 1;
    long N = 1;
    int m = 0;
    int n = 0;
    long B = 10000;
    int prec = 128;
    long P = 10000;
    int Q = 64;
    std::string format = "json";
    std::string cache_dir;
    bool no_cache = false;

    // subcommand extras
    long neg = 1;
    std::string phi;
    std::string tau = "0.1,1.3";
    double s = 0;
    std::string r = "1";
    bool quadrature = false;
    int max_exp = 8;
    int samples = 10;
    unsigned seed = 1;
};

struct ComputationFailure : std::runtime_error {
    json payload;
    ComputationFailure(const std::string& what, json p) : std::runtime_error(what), payload(std::move(p)) {}
};

std::string qstr(const Q& q) { return to_string(q); }
std::string dstr(double x) { return decimal(x, 17); }
std::string rstr(const Real& x) { return decimal(x, 34); }

json cx_json(const Cx<Real>& z) { return {{"re", rstr(z.re)}, {"im", rstr(z.im)}}; }
json cd_json(const std::complex<double>& z) { return {{"re", dstr(z.real())}, {"im", dstr(z.imag())}}; }
json element_json(const FieldElement& x) { return {qstr(x.a), qstr(x.b)}; }

json config_json(const Config& c)
{
    return {{"D", c.D},       {"N", c.N},         {"m", c.m},           {"n", c.n},
            {"bound", c.B},   {"prec", c.prec},   {"prime_bound", c.P}, {"quad", c.Q},
            {"format", c.format}, {"no_cache", c.no_cache}};
}

// ---------------------------------------------------------------- cache

std::string default_cache_dir()
{
    if (const char* e = std::getenv(kCacheEnv); e && *e) return e;
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::string(x) + "/polyeis";
    if (const char* h = std::getenv("HOME"); h && *h) return std::string(h) + "/.cache/polyeis";
    return ".polyeis-cache";
}

std::string checksum(const std::string& s)
{
    boost::crc_32_type crc;
    crc.process_bytes(s.data(), s.size());
    std::ostringstream os;
    os << std::hex << crc.checksum();
    return os.str();
}

class Cache {
public:
    explicit Cache(const Config& c) : enabled_(!c.no_cache), dir_(c.cache_dir.empty() ? default_cache_dir() : c.cache_dir)
    {
    }

    // returns the payload and whether it came from the cache; warnings are appended
    std::pair<json, bool> get_or_compute(const std::string& family, long D, long N,
                                         const std::function<json()>& compute, std::vector<std::string>& warnings)
    {
        if (!enabled_) return {compute(), false};
        fs::path file = fs::path(dir_) / (family + "-D" + std::to_string(D) + "-N" + std::to_string(N) + "-v" +
                                          kArtifactVersion + ".json");
        if (fs::exists(file)) {
            std::ifstream in(file);
            std::stringstream buf;
            buf << in.rdbuf();
            try {
                json entry = json::parse(buf.str());
                std::string body = entry.at("payload").get<std::string>();
                if (entry.at("version") == kArtifactVersion && entry.at("family") == family &&
                    entry.at("D") == D && entry.at("N") == N && entry.at("checksum") == checksum(body))
                    return {json::parse(body), true};
                warnings.push_back("cache entry " + file.string() + " failed validation; recomputed");
            } catch (const json::exception&) {
                warnings.push_back("cache entry " + file.string() + " is corrupted; recomputed");
            }
        }
        json payload = compute();
        std::string body = payload.dump();
        json entry = {{"family", family}, {"D", D},       {"N", N},
                      {"version", kArtifactVersion}, {"checksum", checksum(body)}, {"payload", body}};
        std::error_code ec;
        fs::create_directories(dir_, ec);
        fs::path tmp = file;
        tmp += ".tmp" + std::to_string(::getpid());
        {
            std::ofstream out(tmp);
            out << entry.dump() << "\n";
            if (!out) throw ComputationFailure("cache directory " + dir_ + " is not writable (use --no-cache)", {});
        }
        fs::rename(tmp, file, ec);
        if (ec) throw ComputationFailure("cache directory " + dir_ + " is not writable: " + ec.message(), {});
        return {payload, false};
    }

private:
    bool enabled_;
    std::string dir_;
};

// ---------------------------------------------------------------- inputs

NumberField field_of(const Config& c) { return construct_field(c.D); }

Q parse_q(const std::string& s)
{
    Q q;
    if (q.set_str(s, 10) != 0) throw InvalidInput("not a rational number: " + s);
    q.canonicalize();
    return q;
}

// --phi: serialized table, @path to one, or a list "c:i1,i2 c:i1,i2" of weighted cosets mod N.
// Default: delta(1, 0) - delta(0, 1) at level N.
FractionalSchwartz phi_of(const Config& c)
{
    NumberField F = field_of(c);
    if (c.phi.empty()) {
        if (c.N < 2) throw InvalidInput("the default phi needs N >= 2");
        return schwartz_add(coset_indicator(F, FieldElement(1), c.N, 1, 0),
                            schwartz_scale(-1, coset_indicator(F, FieldElement(1), c.N, 0, 1)));
    }
    std::string text = c.phi;
    if (text[0] == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw InvalidInput("cannot read " + text.substr(1));
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    if (text.rfind("polyeis-schwartz", 0) == 0) {
        auto f = deserialize_schwartz(text);
        if (f.F.D != F.D) throw InvalidInput("serialized phi lives over a different field");
        return f;
    }
    FractionalSchwartz f = zero_schwartz(F, FieldElement(1), c.N);
    std::istringstream is(text);
    std::string tok;
    bool any = false;
    while (is >> tok) {
        auto colon = tok.find(':'), comma = tok.find(',');
        if (colon == std::string::npos || comma == std::string::npos || comma < colon)
            throw InvalidInput("bad coset term '" + tok + "', expected c:i1,i2");
        Q w = parse_q(tok.substr(0, colon));
        long i1 = std::stol(tok.substr(colon + 1, comma - colon - 1));
        long i2 = std::stol(tok.substr(comma + 1));
        f = schwartz_add(f, schwartz_scale(w, coset_indicator(F, FieldElement(1), c.N, i1, i2)));
        any = true;
    }
    if (!any) throw InvalidInput("empty --phi");
    return f;
}

EisensteinPoint point_of(const Config& c, const NumberField& F)
{
    EisensteinPoint pt;
    std::istringstream is(c.tau);
    std::string part;
    while (std::getline(is, part, ';')) {
        auto comma = part.find(',');
        if (comma == std::string::npos) throw InvalidInput("bad --tau, expected x,y[;x,y]");
        double x = std::stod(part.substr(0, comma)), y = std::stod(part.substr(comma + 1));
        if (!(y > 0)) throw InvalidInput("--tau needs Im > 0");
        pt.tau.emplace_back(x, y);
    }
    if (pt.tau.size() == 1 && F.xi == 2) pt.tau.push_back(pt.tau[0]);
    if ((int)pt.tau.size() != F.xi) throw InvalidInput("--tau needs one point per real place");
    pt.r = parse_q(c.r);
    return pt;
}

std::vector<long> primes_of(long n)
{
    std::vector<long> out;
    for (auto [p, e] : factor(n)) {
        (void)e;
        out.push_back(p);
    }
    return out;
}

json lattice_json(const LatticeSumResult& r)
{
    return {{"value", cx_json(r.value)},
            {"tail_estimate", rstr(r.tail_estimate)},
            {"bound", r.B},
            {"terms", r.terms},
            {"precision_bits", r.precision},
            {"requested_precision_bits", r.requested_precision}};
}

// ---------------------------------------------------------------- subcommands

json cmd_field(const Config& c)
{
    NumberField F = field_of(c);
    json j = {{"D", F.D}, {"d_F", F.dF}, {"degree", F.xi}};
    if (F.xi == 2) {
        auto U = unit_data(F);
        auto [p, q] = sqrt_coords(F, U.eps);
        auto [pp, qp] = sqrt_coords(F, U.eps_plus);
        j["omega"] = {{"trace", F.w_tr}, {"constant", F.w_c}};
        j["fundamental_unit"] = {{"sqrt_coords", {qstr(p), qstr(q)}}, {"omega_coords", element_json(U.eps)}, {"norm", U.norm_sign}};
        j["totally_positive_unit"] = {{"sqrt_coords", {qstr(pp), qstr(qp)}}};
    } else {
        j["fundamental_unit"] = nullptr;
    }
    j["class_number"] = class_group(F).order();
    j["narrow_class_number"] = narrow_class_group(F).order();
    return j;
}

json cmd_classgroup(const Config& c)
{
    NumberField F = field_of(c);
    RayClassGroup G(F, c.N);
    json gens = json::array();
    for (auto& t : G.generator_triples()) gens.push_back({{"ideal", to_string(t.ideal)}, {"residue", t.residue}, {"signs", t.signs}});
    json cl = json::array();
    for (auto& I : G.class_group().reps) cl.push_back(to_string(I));
    json by_type = json::object();
    for (int m : {0, 1}) by_type[m ? "odd" : "even"] = characters_with_sign(G, m).size();
    long k = F.xi == 2 ? unit_subgroup_generator(F, c.N).k : 0;
    return {{"D", F.D},
            {"N", c.N},
            {"ray_class_order", G.order()},
            {"invariants", G.group().invariants()},
            {"generators", gens},
            {"class_group_reps", cl},
            {"class_number", class_group(F).order()},
            {"narrow_class_number", narrow_class_group(F).order()},
            {"unit_level_exponent", k},
            {"characters_by_type", by_type}};
}

json cmd_fourier(const Config& c)
{
    auto f = phi_of(c);
    auto fh = fourier_transform(f);
    return {{"input", serialize(f)},
            {"transform", serialize(fh)},
            {"double_transform_is_identity", schwartz_equal(fourier_transform(fh), f)},
            {"in_S0", is_S0(f)}};
}

json cmd_zeta(const Config& c)
{
    NumberField F = field_of(c);
    if (c.neg < 1) throw InvalidInput("--neg must be positive");
    Q v = dedekind_zeta_negative(F, c.neg);
    json j = {{"D", F.D}, {"s", -c.neg}, {"value", qstr(v)}};
    if (F.xi == 2 && c.neg == 1) j["siegel"] = qstr(siegel_sigma1(F));
    return j;
}

json cmd_eisenstein(const Config& c)
{
    NumberField F = field_of(c);
    auto phi = untwisted(phi_of(c));
    auto pt = point_of(c, F);
    auto r = eisenstein_value(phi, c.m, c.s, pt, c.B, c.prec);
    json tau = json::array();
    for (auto& t : pt.tau) tau.push_back(cd_json(t));
    json j = lattice_json(r);
    j["tau"] = tau;
    j["r"] = qstr(pt.r);
    j["s"] = dstr(c.s);
    return j;
}

json cmd_constant_term(const Config& c)
{
    NumberField F = field_of(c);
    auto phi = untwisted(phi_of(c));
    auto r = constant_term(phi, c.m, {}, c.B, c.prec);
    json j = lattice_json(r);
    if (c.quadrature) {
        std::vector<double> y(F.xi, 1.0);
        auto q = constant_term_quadrature(phi, c.m, y, Q(1), c.Q, c.B, c.prec);
        Real diff = (q.value - r.value).abs();
        j["quadrature"] = {{"points", c.Q}, {"value", cx_json(q.value)}, {"difference", rstr(diff)}};
    }
    return j;
}

json cmd_certify(const Config& c)
{
    NumberField F = field_of(c);
    auto phi = untwisted(phi_of(c));
    auto r1 = constant_term(phi, c.m, {}, c.B, c.prec);
    auto r2 = constant_term(phi, c.m, {}, 2 * c.B, c.prec);
    auto primes = primes_of(c.N * F.dF);
    auto cert = certify_rational(r1, r2, primes, c.max_exp);
    json fac = json::array();
    for (auto [p, e] : cert.denominator_factorization) fac.push_back({p, e});
    json runs = json::array(), res = json::array();
    for (auto& v : cert.runs) runs.push_back(cx_json(v));
    for (auto& v : cert.residuals) res.push_back(rstr(v));
    json j = {{"success", cert.success},
              {"rational", cert.success ? json(qstr(cert.rational)) : json(nullptr)},
              {"denominator_factorization", fac},
              {"denominator_bound", cert.denominator_bound.get_str()},
              {"allowed_primes", primes},
              {"tolerance", rstr(cert.tolerance)},
              {"runs", runs},
              {"residuals", res},
              {"diagnostics", cert.diagnostics}};
    if (!cert.success) throw ComputationFailure("certification failed: " + cert.diagnostics, j);
    return j;
}

FractionalSchwartz random_S0(const NumberField& F, long N, std::mt19937& rng)
{
    FractionalSchwartz f = zero_schwartz(F, FieldElement(1), N);
    std::uniform_int_distribution<int> val(-3, 3);
    std::uniform_int_distribution<long> idx(1, f.size() - 1);
    long total = 0;
    for (int k = 0; k < 6; ++k) {
        long v = val(rng);
        f.table[idx(rng)] += CyclotomicValue(v);
        total += v;
    }
    f.table[idx(rng)] -= CyclotomicValue(total);
    return f;
}

json matrix_json(const LevelMatrix& x) { return {x.a, x.b, x.c, x.d}; }

json cmd_horospherical(const Config& c)
{
    NumberField F = field_of(c);
    if (c.N < 2) throw InvalidInput("horospherical needs N >= 2");
    check_sl2_budget(F, c.N);
    auto G = std::make_shared<const RayClassGroup>(F, c.N);
    auto L = std::make_shared<const LevelGroup>(F, c.N);
    std::mt19937 rng(c.seed);
    std::uniform_int_distribution<size_t> pick(0, L->gl().size() - 1);

    json j = {{"D", F.D}, {"N", c.N}, {"m", c.m}};
    j["group_orders"] = {{"SL2", L->sl().size()}, {"GL2", L->gl().size()}, {"ray_class", G->order()},
                         {"lines", L->line_reps().size()}};
    json lambdas = json::array();
    for (auto& chi : characters_with_sign(*G, c.m)) {
        auto lam = lambda_N(*G, chi, c.m, LambdaMethod::lattice, c.P, c.B, c.prec);
        lambdas.push_back({{"chi", chi.exps}, {"value", cd_json(lam.value)}, {"tail_estimate", dstr(lam.tail_estimate)}});
    }
    j["lambda"] = lambdas;

    // kernel check: rho0 of a random S0 function has zero spherical projection
    auto phi = untwisted(random_S0(F, c.N, rng));
    auto img = rho0(phi, c.m, c.N, c.B, c.prec);
    json comps = json::array();
    double worst = 0;
    for (auto& comp : img.components) {
        auto pr = psi_project(comp);
        worst = std::max(worst, std::abs(pr.coefficient));
        comps.push_back({{"chi", comp.phi.chi.exps},
                         {"spherical", pr.spherical},
                         {"coefficient", cd_json(pr.coefficient)},
                         {"average", cd_json(pr.average)},
                         {"b_law_defect", dstr(b_law_defect(comp))}});
    }
    j["kernel_check"] = {{"phi", serialize(phi.base)}, {"components", comps}, {"max_coefficient", dstr(worst)},
                         {"pass", worst < 1e-8}};

    // round trip: psi -> preimage -> rho_m
    json rt;
    auto chis = characters_with_sign(*G, c.m);
    HeckeCharacterData hd{G, trivial_character(G->group()), chis.at(0), c.m, c.n};
    std::uniform_int_distribution<int> val(-4, 4);
    std::vector<CyclotomicValue> lines;
    for (size_t i = 0; i < L->line_reps().size(); ++i) lines.emplace_back(val(rng));
    auto psi = kernel_part(induce_from_lines(hd, L, lines));
    try {
        auto pre = preimage(psi, c.B, c.prec);
        auto back = horospherical_map(pre, c.m, c.N, c.B, c.prec);
        json pts = json::array();
        double res = 0;
        for (int k = 0; k < c.samples; ++k) {
            auto x = L->matrix(L->gl()[pick(rng)]);
            double d = std::abs(back(x) - psi(x));
            res = std::max(res, d);
            pts.push_back({{"x", matrix_json(x)}, {"psi", cd_json(psi(x))}, {"rho", cd_json(back(x))}, {"residual", dstr(d)}});
        }
        rt = {{"chi", hd.chi.exps}, {"preimage_in_S0", is_S0(pre)}, {"samples", pts}, {"max_residual", dstr(res)},
              {"pass", res < 1e-6}};
    } catch (const PreconditionError& e) {
        rt = {{"skipped", e.what()}};
    }
    j["round_trip"] = rt;
    return j;
}

// ---------------------------------------------------------------- output

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out)
{
    if (j.is_object()) {
        for (auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
    }
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

void emit(const json& record, const std::string& format)
{
    if (format == "json") {
        std::cout << record.dump() << "\n";
        return;
    }
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(record, "", rows);
    if (format == "csv") {
        std::cout << "key,value\n";
        for (auto& [k, v] : rows) std::cout << csv_field(k) << "," << csv_field(v) << "\n";
    } else {
        for (auto& [k, v] : rows) std::cout << k << ": " << v << "\n";
    }
}

json make_record(const std::string& command, const Config& c)
{
    return {{"schema_version", kSchemaVersion}, {"artifact_version", kArtifactVersion}, {"command", command},
            {"config", config_json(c)}};
}

}  // namespace

int main(int argc, char** argv)
{
    Config c;
    CLI::App app{"polylogarithmic Eisenstein constant terms over Q and real quadratic fields", "polyeis"};
    app.require_subcommand(1);
    app.add_option("--D", c.D, "squarefree discriminant parameter, 1 for Q")->check(CLI::PositiveNumber);
    app.add_option("--N", c.N, "level")->check(CLI::PositiveNumber);
    app.add_option("--m", c.m, "weight parameter, K = m + 2")->check(CLI::NonNegativeNumber);
    app.add_option("--n", c.n, "twist by the norm");
    app.add_option("--bound", c.B, "truncation bound B")->check(CLI::PositiveNumber);
    app.add_option("--prec", c.prec, "precision in bits")->check(CLI::PositiveNumber);
    app.add_option("--prime-bound", c.P, "Euler product prime bound P")->check(CLI::PositiveNumber);
    app.add_option("--quad", c.Q, "quadrature points per place")->check(CLI::PositiveNumber);
    app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--cache-dir", c.cache_dir, std::string("cache directory (default $") + kCacheEnv + ")");
    app.add_flag("--no-cache", c.no_cache, "neither read nor write the cache");
    app.fallthrough();

    auto* field = app.add_subcommand("field", "discriminant, units and class numbers");
    auto* classgroup = app.add_subcommand("classgroup", "ray class group of level N times the real places");
    auto* fourier = app.add_subcommand("fourier", "symplectic Fourier transform of a table");
    auto* zeta = app.add_subcommand("zeta", "Dedekind zeta value at a negative integer");
    auto* eis = app.add_subcommand("eisenstein", "Eisenstein series value at tau");
    auto* ct = app.add_subcommand("constant-term", "constant term lattice sum");
    auto* cert = app.add_subcommand("certify", "certify the constant term as a rational");
    auto* horo = app.add_subcommand("horospherical", "kernel check and round trip of the horospherical map");
    for (auto* sc : {fourier, eis, ct, cert})
        sc->add_option("--phi", c.phi, "table: serialized text, @file, or 'c:i1,i2 ...' cosets mod N");
    zeta->add_option("--neg", c.neg, "evaluate at s = -neg")->check(CLI::PositiveNumber);
    eis->add_option("--tau", c.tau, "x,y per real place, ';'-separated");
    eis->add_option("--s", c.s, "spectral parameter");
    eis->add_option("--r", c.r, "torus scale r");
    ct->add_flag("--quadrature", c.quadrature, "also average the Eisenstein series over the period torus");
    cert->add_option("--max-exp", c.max_exp, "exponent bound for the denominator")->check(CLI::PositiveNumber);
    horo->add_option("--samples", c.samples, "round-trip sample points")->check(CLI::PositiveNumber);
    horo->add_option("--seed", c.seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "polyeis: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    auto* sc = app.get_subcommands().front();
    const std::string name = sc->get_name();
    json record = make_record(name, c);
    std::vector<std::string> warnings;
    auto t0 = std::chrono::steady_clock::now();
    int status = 0;
    try {
        Cache cache(c);
        json payload;
        bool hit = false;
        if (name == "field") {
            std::tie(payload, hit) = cache.get_or_compute("field", c.D, 1, [&] { return cmd_field(c); }, warnings);
        } else if (name == "classgroup") {
            std::tie(payload, hit) =
                cache.get_or_compute("classgroup", c.D, c.N, [&] { return cmd_classgroup(c); }, warnings);
        } else if (name == "fourier") {
            payload = cmd_fourier(c);
        } else if (name == "zeta") {
            payload = cmd_zeta(c);
        } else if (name == "eisenstein") {
            payload = cmd_eisenstein(c);
        } else if (name == "constant-term") {
            payload = cmd_constant_term(c);
        } else if (name == "certify") {
            payload = cmd_certify(c);
        } else {
            payload = cmd_horospherical(c);
        }
        record["payload"] = payload;
        record["cache_hit"] = hit;
    } catch (const InvalidInput& e) {
        std::cerr << "polyeis: " << e.what() << "\n" << sc->help();
        return 2;
    } catch (const ComputationFailure& e) {
        record["payload"] = e.payload;
        record["error"] = e.what();
        record["cache_hit"] = false;
        status = 1;
    } catch (const std::exception& e) {
        record["payload"] = nullptr;
        record["error"] = e.what();
        record["cache_hit"] = false;
        status = 1;
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    record["wall_time_s"] = dstr(wall);
    for (auto& w : warnings) {
        json wr = make_record(name, c);
        wr["warning"] = w;
        emit(wr, c.format);
    }
    emit(record, c.format);
    if (status) std::cerr << "polyeis: " << record["error"].get<std::string>() << "\n";
    return status;
}
