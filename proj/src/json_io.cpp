#include "twistorkit/json_io.hpp"

#include <fstream>

namespace twistorkit {

namespace {

json rational_to_json(const mpq_class& q) { return q.get_str(); }

mpq_class rational_from_json(const json& j) {
    if (j.is_number_integer()) return mpq_class(static_cast<long>(j.get<long long>()));
    if (j.is_string()) {
        mpq_class q;
        if (q.set_str(j.get<std::string>(), 10) != 0 || sgn(q.get_den()) == 0)
            fail(Errc::schema_error, "malformed rational string: " + j.get<std::string>());
        q.canonicalize();
        return q;
    }
    fail(Errc::schema_error, "exact values must be rational strings or integers");
}

} // namespace

json scalar_to_json(const Scalar& s) {
    json j;
    if (s.isExact()) {
        j["re"] = rational_to_json(s.exactValue().re);
        j["im"] = rational_to_json(s.exactValue().im);
    } else {
        j["re"] = s.floatValue().real();
        j["im"] = s.floatValue().imag();
    }
    return j;
}

Scalar scalar_from_json(const json& j, Backend bk) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im"))
        fail(Errc::schema_error, "scalar must be an object with re and im");
    if (bk == Backend::exact) return Scalar::exact(rational_from_json(j["re"]),
                                                   rational_from_json(j["im"]));
    if (!j["re"].is_number() || !j["im"].is_number())
        fail(Errc::schema_error, "float values must be JSON numbers");
    return Scalar::fromDouble(j["re"].get<double>(), j["im"].get<double>());
}

json poly_to_json(const LaurentPoly& p) {
    json arr = json::array();
    for (const auto& [k, c] : p.terms()) {
        json term = scalar_to_json(c);
        term["pow"] = k;
        arr.push_back(term);
    }
    return arr;
}

LaurentPoly poly_from_json(const json& j, Backend bk) {
    if (!j.is_array()) fail(Errc::schema_error, "polynomial must be an array of terms");
    LaurentPoly p(bk);
    for (const auto& term : j) {
        if (!term.contains("pow") || !term["pow"].is_number_integer())
            fail(Errc::schema_error, "polynomial term needs an integer pow");
        p.addToCoeff(term["pow"].get<int>(), scalar_from_json(term, bk));
    }
    return p;
}

json lmatrix_to_json(const LaurentMatrix& m) {
    json j;
    j["rank"] = m.size();
    json entries = json::array();
    for (int i = 0; i < m.size(); ++i)
        for (int c = 0; c < m.size(); ++c) entries.push_back(poly_to_json(m.at(i, c)));
    j["entries"] = entries;
    return j;
}

LaurentMatrix lmatrix_from_json(const json& j, Backend bk) {
    if (!j.is_object() || !j.contains("rank") || !j.contains("entries"))
        fail(Errc::schema_error, "matrix needs rank and entries");
    int r = j["rank"].get<int>();
    if (r < 1) fail(Errc::schema_error, "rank must be positive");
    const json& entries = j["entries"];
    if (!entries.is_array() || static_cast<int>(entries.size()) != r * r)
        fail(Errc::schema_error, "entries must be a row-major array of rank^2 polynomials");
    LaurentMatrix m(r, bk);
    for (int i = 0; i < r; ++i)
        for (int c = 0; c < r; ++c) m.at(i, c) = poly_from_json(entries[i * r + c], bk);
    return m;
}

json cmatrix_to_json(const CMat& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    json entries = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int c = 0; c < m.cols(); ++c) entries.push_back(scalar_to_json(m.at(i, c)));
    j["entries"] = entries;
    return j;
}

CMat cmatrix_from_json(const json& j, Backend bk) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        fail(Errc::schema_error, "matrix needs rows, cols and entries");
    int rows = j["rows"].get<int>(), cols = j["cols"].get<int>();
    const json& entries = j["entries"];
    if (!entries.is_array() || static_cast<int>(entries.size()) != rows * cols)
        fail(Errc::schema_error, "entries must be a row-major array of rows*cols scalars");
    CMat m(rows, cols, bk);
    for (int i = 0; i < rows; ++i)
        for (int c = 0; c < cols; ++c) m.at(i, c) = scalar_from_json(entries[i * cols + c], bk);
    return m;
}

json cvec_to_json(const CVec& v) {
    json arr = json::array();
    for (const auto& s : v) arr.push_back(scalar_to_json(s));
    return arr;
}

CVec cvec_from_json(const json& j, Backend bk) {
    if (!j.is_array()) fail(Errc::schema_error, "vector must be an array of scalars");
    CVec v;
    v.reserve(j.size());
    for (const auto& s : j) v.push_back(scalar_from_json(s, bk));
    return v;
}

json bundle_to_json(const BundleCP1& E) {
    json j = lmatrix_to_json(E.transition());
    j["schema"] = kSchemaTag;
    j["kind"] = "bundle";
    return j;
}

BundleCP1 bundle_from_json(const json& j, Backend bk) {
    require_schema(j, "bundle");
    LaurentMatrix T = lmatrix_from_json(j, bk);
    try {
        return BundleCP1(T.size(), T);
    } catch (const Error& e) {
        if (e.code() == Errc::not_unit_on_cstar)
            fail(Errc::schema_error, std::string("transition is not a bundle datum: ") + e.what());
        throw;
    }
}

json section_ab_to_json(const SectionAB& s) {
    json j;
    j["schema"] = kSchemaTag;
    j["kind"] = "section_ab";
    j["n"] = s.n;
    j["a"] = cvec_to_json(s.a);
    j["b"] = cvec_to_json(s.b);
    return j;
}

SectionAB section_ab_from_json(const json& j, Backend bk) {
    require_schema(j, "section_ab");
    if (!j.contains("n") || !j.contains("a") || !j.contains("b"))
        fail(Errc::schema_error, "section needs n, a and b");
    SectionAB s;
    s.n = j["n"].get<int>();
    s.a = cvec_from_json(j["a"], bk);
    s.b = cvec_from_json(j["b"], bk);
    if (s.n < 1 || static_cast<int>(s.a.size()) != 2 * s.n ||
        static_cast<int>(s.b.size()) != 2 * s.n)
        fail(Errc::schema_error, "section vectors must have length 2n");
    return s;
}

json twistor_data_to_json(const TwistorData& D, const CMat& Omega_raw, const FlatHK& hk) {
    json j;
    j["schema"] = kSchemaTag;
    j["kind"] = "twistor_data";
    j["n"] = D.n;
    json frame = json::array();
    for (int k = 1; k <= 2 * D.n; ++k) frame.push_back("dw" + std::to_string(k));
    for (int k = 1; k <= 2 * D.n; ++k) frame.push_back("dw" + std::to_string(k) + "_bar");
    j["frame"] = frame;
    j["A"] = cmatrix_to_json(D.Q.A());
    j["Omega_raw"] = cmatrix_to_json(Omega_raw);
    j["Omega"] = cmatrix_to_json(D.Omega);
    j["mu"] = scalar_to_json(D.mu);
    OmegaFamily W = omega_family(hk);
    j["matrices"] = {{"I", cmatrix_to_json(hk.I)}, {"J", cmatrix_to_json(hk.J)},
                     {"K", cmatrix_to_json(hk.K)}, {"g", cmatrix_to_json(hk.g)},
                     {"W1", cmatrix_to_json(W.W1)}, {"W2", cmatrix_to_json(W.W2)},
                     {"W3", cmatrix_to_json(W.W3)}};
    return j;
}

TwistorData twistor_data_from_json(const json& j, Backend bk) {
    require_schema(j, "twistor_data");
    if (!j.contains("n") || !j.contains("A") || !j.contains("Omega"))
        fail(Errc::schema_error, "twistor data needs n, A and Omega");
    int n = j["n"].get<int>();
    if (n < 1) fail(Errc::schema_error, "n must be positive");
    CMat A = cmatrix_from_json(j["A"], bk);
    CMat Omega = cmatrix_from_json(j["Omega"], bk);
    Scalar mu = j.contains("mu") ? scalar_from_json(j["mu"], bk) : Scalar::one(bk);
    if (A.rows() != 2 * n) fail(Errc::schema_error, "A must be 2n x 2n");
    QuaternionicData Q = check_quaternionic(A);
    return wrap_twistor_data(Q, Omega, mu);
}

json family_to_json(const BundleFamily& F) {
    json j;
    j["schema"] = kSchemaTag;
    j["kind"] = "family";
    j["rank"] = F.rank();
    j["params"] = F.params();
    json entries = json::array();
    for (int i = 0; i < F.rank(); ++i)
        for (int c = 0; c < F.rank(); ++c) {
            json terms = json::array();
            for (const auto& term : F.entryTerms(i, c))
                terms.push_back({{"tpow", term.tpow}, {"poly", poly_to_json(term.coeff)}});
            entries.push_back(terms);
        }
    j["entries"] = entries;
    return j;
}

BundleFamily family_from_json(const json& j, Backend bk) {
    require_schema(j, "family");
    if (!j.contains("rank") || !j.contains("params") || !j.contains("entries"))
        fail(Errc::schema_error, "family needs rank, params and entries");
    int r = j["rank"].get<int>(), l = j["params"].get<int>();
    if (r < 1 || l < 1) fail(Errc::schema_error, "rank and params must be positive");
    const json& entries = j["entries"];
    if (!entries.is_array() || static_cast<int>(entries.size()) != r * r)
        fail(Errc::schema_error, "entries must be a row-major array of rank^2 term lists");
    BundleFamily F(r, l, bk);
    for (int i = 0; i < r; ++i)
        for (int c = 0; c < r; ++c) {
            const json& terms = entries[i * r + c];
            if (!terms.is_array()) fail(Errc::schema_error, "entry term list must be an array");
            for (const auto& term : terms) {
                if (!term.contains("tpow") || !term.contains("poly"))
                    fail(Errc::schema_error, "family term needs tpow and poly");
                std::vector<int> tpow = term["tpow"].get<std::vector<int>>();
                if (static_cast<int>(tpow.size()) != l)
                    fail(Errc::schema_error, "tpow length must equal params");
                F.addTerm(i, c, tpow, poly_from_json(term["poly"], bk));
            }
        }
    return F;
}

json report_to_json(const VerifyReport& rep) {
    json j;
    j["schema"] = kSchemaTag;
    j["kind"] = "report";
    j["tolerance"] = rep.tolerance;
    j["pass"] = rep.pass();
    json checks = json::object();
    for (const auto& c : rep.checks) {
        json entry;
        entry["residual"] = c.residual;
        entry["ok"] = c.ok;
        if (!c.note.empty()) entry["note"] = c.note;
        checks[c.name] = entry;
    }
    j["checks"] = checks;
    return j;
}

Scalar parse_complex_literal(const std::string& text, Backend bk) {
    // forms: "a", "bi", "a+bi", "a-bi" with rational or decimal a, b
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) fail(Errc::schema_error, "empty complex literal");

    auto parseReal = [&](std::string part) -> Scalar {
        if (!part.empty() && part.front() == '+') part.erase(part.begin());
        if (bk == Backend::exact) {
            mpq_class q;
            std::size_t dot = part.find('.');
            if (part.empty()) {
                q = 1;
            } else if (part == "-") {
                q = -1;
            } else if (dot != std::string::npos) {
                // decimal literal, converted exactly: digits / 10^places
                std::string digits = part.substr(0, dot) + part.substr(dot + 1);
                std::size_t places = part.size() - dot - 1;
                mpz_class num;
                if (digits.empty() || digits == "-" ||
                    mpz_set_str(num.get_mpz_t(), digits.c_str(), 10) != 0)
                    fail(Errc::schema_error, "malformed decimal in literal: " + part);
                mpz_class den;
                mpz_ui_pow_ui(den.get_mpz_t(), 10, places);
                q = mpq_class(num, den);
            } else if (q.set_str(part, 10) != 0 || sgn(q.get_den()) == 0) {
                fail(Errc::schema_error, "malformed rational in literal: " + part);
            }
            q.canonicalize();
            return Scalar::exact(q);
        }
        if (part.empty()) return Scalar::fromDouble(1.0);
        if (part == "-") return Scalar::fromDouble(-1.0);
        try {
            return Scalar::fromDouble(std::stod(part));
        } catch (...) {
            fail(Errc::schema_error, "malformed number in literal: " + part);
        }
    };

    // split at the last top-level +/- that is not the leading sign
    std::size_t split = std::string::npos;
    for (std::size_t k = 1; k < s.size(); ++k)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != '/' && s[k - 1] != 'e' && s[k - 1] != 'E')
            split = k;

    bool hasI = s.back() == 'i' || s.back() == 'I';
    if (!hasI) return parseReal(s);
    std::string body = s.substr(0, s.size() - 1);
    if (split == std::string::npos) {
        // pure imaginary
        Scalar im = parseReal(body);
        return Scalar::imagUnit(bk) * im;
    }
    Scalar re = parseReal(s.substr(0, split));
    std::string imPart = body.substr(split);
    return re + Scalar::imagUnit(bk) * parseReal(imPart);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::schema_error, "cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(Errc::schema_error, std::string("malformed JSON: ") + e.what());
    }
    return j;
}

void require_schema(const json& j, const char* kind) {
    if (!j.is_object() || !j.contains("schema") || j["schema"] != kSchemaTag)
        fail(Errc::schema_error, std::string("document must declare schema ") + kSchemaTag);
    if (kind != nullptr && (!j.contains("kind") || j["kind"] != kind))
        fail(Errc::schema_error, std::string("document kind must be ") + kind);
}

} // namespace twistorkit
