#include "twistorkit/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "twistorkit/json_io.hpp"

namespace twistorkit {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSchema = 3;

Backend backendFromName(const std::string& name) {
    if (name == "exact") return Backend::exact;
    if (name == "float") return Backend::floating;
    fail(Errc::usage_error, "backend must be 'exact' or 'float'");
}

Backend defaultBackend() {
    const char* env = std::getenv("TWISTORKIT_BACKEND");
    if (env == nullptr || std::string(env).empty()) return Backend::exact;
    return backendFromName(env);
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

std::vector<CVec> parseSampleList(const std::string& text, int params, Backend bk) {
    std::vector<std::string> groups;
    std::string sep = text.find(';') != std::string::npos ? ";" : (params == 1 ? "," : ";");
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t next = text.find(sep[0], pos);
        if (next == std::string::npos) next = text.size();
        groups.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
    std::vector<CVec> out;
    for (const auto& g : groups) {
        if (g.empty()) continue;
        CVec tuple;
        std::size_t p = 0;
        while (p <= g.size()) {
            std::size_t next = g.find(',', p);
            if (next == std::string::npos) next = g.size();
            tuple.push_back(parse_complex_literal(g.substr(p, next - p), bk));
            p = next + 1;
        }
        if (static_cast<int>(tuple.size()) != params)
            fail(Errc::usage_error, "each sample needs one value per family parameter");
        out.push_back(std::move(tuple));
    }
    if (out.empty()) fail(Errc::usage_error, "no sample points given");
    return out;
}

CVec parseVectorLiteral(const std::string& text, Backend bk) {
    CVec v;
    std::size_t p = 0;
    while (p <= text.size()) {
        std::size_t next = text.find(',', p);
        if (next == std::string::npos) next = text.size();
        v.push_back(parse_complex_literal(text.substr(p, next - p), bk));
        p = next + 1;
    }
    return v;
}

struct RoundtripOutcome {
    json doc;
    bool pass = false;
};

RoundtripOutcome runRoundtrip(int n, Backend bk, int samples, std::uint64_t seed,
                              const std::string& dataPath, double tol) {
    VerifyReport all;
    all.tolerance = bk == Backend::exact ? 0.0 : tol;

    TwistorData D = [&] {
        if (!dataPath.empty()) return twistor_data_from_json(load_json_file(dataPath), bk);
        FlatHK hk = standard_flat(n, bk);
        return make_twistor_data(quaternionic_from_tau(n, bk), restrict_omega(hk), tol);
    }();
    const int d = D.dim();

    all.merge(twistor_flat_battery(D.n, bk, samples, seed), "flat.");
    all.merge(verify_suite(D, samples, seed, tol), "data.");

    // recovered metric Gram over the real frame (e_k, i e_k) must be twice the
    // Euclidean pairing
    Backend gb = bk;
    Scalar iu = Scalar::imagUnit(gb);
    std::vector<CVec> frame;
    for (int k = 0; k < d; ++k) {
        CVec e = vecZero(d, gb);
        e[k] = Scalar::one(gb);
        frame.push_back(e);
    }
    for (int k = 0; k < d; ++k) frame.push_back(vecScale(iu, frame[k]));
    CMat gram(2 * d, 2 * d, gb);
    double gramResidual = 0.0;
    Scalar two = gb == Backend::exact ? Scalar::fromInt(2) : Scalar::fromDouble(2.0);
    for (int r = 0; r < 2 * d; ++r)
        for (int c = 0; c < 2 * d; ++c) {
            gram.at(r, c) = metric(D, frame[r], frame[c], tol);
            Scalar herm = dotBilinear(frame[r], vecConj(frame[c]));
            Scalar expected = two * (gb == Backend::exact
                                         ? Scalar::exact(herm.exactValue().re)
                                         : Scalar::fromDouble(herm.approx().real()));
            gramResidual = std::max(gramResidual, (gram.at(r, c) - expected).absApprox());
        }
    all.add("metric_gram_twice_euclidean", gramResidual);

    // desk-scale openness: random sections keep degree-one normal splitting
    SplitMix64 rng(seed + 2);
    std::vector<SectionAB> sections;
    for (int t = 0; t < 50; ++t) sections.push_back(random_section_ab(D.n, rng, Backend::exact));
    StabilityReport stab = splitting_stability_scan(D.n, sections);
    all.addFlag("normal_splitting_degree_one", stab.all_degree_one);
    all.addFlag("normal_correction_zero", stab.corrections_zero);

    // real-section condition reproduced from points
    bool realOk = true;
    for (int t = 0; t < 20; ++t) {
        CVec x(D.n, Scalar::zero(gb)), y(D.n, Scalar::zero(gb));
        for (int i = 0; i < D.n; ++i) {
            x[i] = randomScalar(rng, gb);
            y[i] = randomScalar(rng, gb);
        }
        realOk = realOk && is_real_section(quaternionic_from_tau(D.n, gb),
                                           real_section_from_point(x, y));
    }
    all.addFlag("real_section_condition", realOk);

    RoundtripOutcome rt;
    rt.doc = report_to_json(all);
    rt.doc["kind"] = "roundtrip";
    rt.doc["n"] = D.n;
    rt.doc["seed"] = seed;
    rt.doc["mu"] = scalar_to_json(D.mu);
    rt.doc["metric_gram"] = cmatrix_to_json(gram);
    rt.pass = all.pass();
    return rt;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact twistor computations for bundles on the projective line"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string backendName;
    app.add_option("--backend", backendName, "scalar backend: exact or float (default from TWISTORKIT_BACKEND)");

    // split
    auto* split = app.add_subcommand("split", "Grothendieck splitting type of a bundle");
    std::string splitBundle;
    int splitWindow = -1;
    split->add_option("--bundle", splitBundle, "bundle JSON file")->required();
    split->add_option("--window", splitWindow, "override the twist scan window");

    // cohomology
    auto* coh = app.add_subcommand("cohomology", "h0/h1 and splitting of a bundle");
    std::string cohBundle;
    int cohTwist = 0;
    coh->add_option("--bundle", cohBundle, "bundle JSON file")->required();
    coh->add_option("--twist", cohTwist, "tensor by this degree before computing");

    // quat-check
    auto* quat = app.add_subcommand("quat-check", "validate a quaternionic-structure matrix");
    std::string quatMatrix;
    quat->add_option("--matrix", quatMatrix, "matrix JSON file")->required();

    // real-section
    auto* rsec = app.add_subcommand("real-section", "test a section against a real structure");
    std::string rsecMatrix, rsecSection;
    rsec->add_option("--matrix", rsecMatrix, "matrix JSON file")->required();
    rsec->add_option("--section", rsecSection, "section JSON file")->required();

    // twistor build | check
    auto* twistor = app.add_subcommand("twistor", "flat twistor model");
    twistor->require_subcommand(1);
    auto* tbuild = twistor->add_subcommand("build", "emit the flat model data");
    int tbuildN = 1;
    std::string tbuildOut;
    tbuild->add_option("--n", tbuildN, "quaternionic dimension");
    tbuild->add_option("--out", tbuildOut, "output file (stdout when omitted)");
    auto* tcheck = twistor->add_subcommand("check", "run the flat-model invariant battery");
    int tcheckN = 1, tcheckSamples = 20;
    std::uint64_t tcheckSeed = kDefaultSeed;
    double tcheckTol = 1e-10;
    tcheck->add_option("--n", tcheckN, "quaternionic dimension");
    tcheck->add_option("--samples", tcheckSamples, "sample count");
    tcheck->add_option("--seed", tcheckSeed, "generator seed");
    tcheck->add_option("--tol", tcheckTol, "float-backend residual tolerance");

    // verify
    auto* verify = app.add_subcommand("verify", "verify twistor data identities");
    std::string verifyData;
    int verifySamples = 100;
    std::uint64_t verifySeed = kDefaultSeed;
    double verifyTol = 1e-10;
    verify->add_option("--data", verifyData, "twistor data JSON file")->required();
    verify->add_option("--samples", verifySamples, "sample count");
    verify->add_option("--seed", verifySeed, "generator seed");
    verify->add_option("--tol", verifyTol, "float-backend residual tolerance");

    // metric
    auto* met = app.add_subcommand("metric", "evaluate the recovered metric");
    std::string metData, metA, metB;
    met->add_option("--data", metData, "twistor data JSON file")->required();
    met->add_option("--a", metA, "first tangent parameter, comma-separated complex literals")
        ->required();
    met->add_option("--b", metB, "second tangent parameter")->required();

    // deform scan
    auto* deform = app.add_subcommand("deform", "deformation families");
    deform->require_subcommand(1);
    auto* dscan = deform->add_subcommand("scan", "cohomology scan over a family");
    std::string dFamily, dSpecial, dSamples;
    int dTwist = 0;
    dscan->add_option("--family", dFamily, "family JSON file")->required();
    dscan->add_option("--special", dSpecial, "special parameter point")->required();
    dscan->add_option("--samples", dSamples, "comparison points, comma-separated")->required();
    dscan->add_option("--twist", dTwist, "tensor by this degree");

    // roundtrip
    auto* round = app.add_subcommand("roundtrip", "forward construction plus inverse recovery");
    int roundN = 1, roundSamples = 50;
    std::uint64_t roundSeed = kDefaultSeed;
    std::string roundData;
    double roundTol = 1e-10;
    round->add_option("--n", roundN, "quaternionic dimension");
    round->add_option("--samples", roundSamples, "sample count");
    round->add_option("--seed", roundSeed, "generator seed");
    round->add_option("--data", roundData, "use twistor data from this file instead of building");
    round->add_option("--tol", roundTol, "float-backend residual tolerance");

    std::vector<std::string> argv = args;
    try {
        app.parse(argv.empty() ? std::vector<std::string>{}
                               : std::vector<std::string>(argv.rbegin(), argv.rend()));
    } catch (const CLI::CallForHelp& e) {
        err << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        Backend bk = backendName.empty() ? defaultBackend() : backendFromName(backendName);

        if (*split || *coh) {
            if (bk != Backend::exact)
                fail(Errc::usage_error,
                     "split and cohomology require the exact backend");
        }

        if (*split) {
            BundleCP1 E = bundle_from_json(load_json_file(splitBundle), Backend::exact);
            SplittingType st = splitting_type(
                E, splitWindow >= 0 ? std::optional<int>(splitWindow) : std::nullopt);
            json j{{"schema", kSchemaTag}, {"kind", "splitting"},
                   {"splitting", st.degrees}, {"winding", E.winding()}};
            emit(out, j);
            err << "splitting " << st.str() << ", winding " << E.winding() << "\n";
            return kExitOk;
        }

        if (*coh) {
            BundleCP1 E = twist(bundle_from_json(load_json_file(cohBundle), Backend::exact),
                                cohTwist);
            SplittingType st = splitting_type(E);
            int h0v = 0, h1v = 0;
            for (int dgr : st.degrees) {
                h0v += std::max(dgr + 1, 0);
                h1v += std::max(-dgr - 1, 0);
            }
            json j{{"schema", kSchemaTag}, {"kind", "cohomology"}, {"h0", h0v}, {"h1", h1v},
                   {"splitting", st.degrees}, {"winding", E.winding()}};
            emit(out, j);
            err << "h0 " << h0v << ", h1 " << h1v << ", splitting " << st.str() << "\n";
            return kExitOk;
        }

        if (*quat) {
            json doc = load_json_file(quatMatrix);
            require_schema(doc, nullptr);
            CMat A = cmatrix_from_json(doc, bk);
            try {
                QuaternionicData Q = check_quaternionic(A);
                json j{{"schema", kSchemaTag}, {"kind", "quat_check"}, {"valid", true},
                       {"n", Q.n()}};
                emit(out, j);
                return kExitOk;
            } catch (const Error& e) {
                if (e.code() != Errc::not_quaternionic && e.code() != Errc::odd_dimension) throw;
                json j{{"schema", kSchemaTag}, {"kind", "quat_check"}, {"valid", false},
                       {"error", e.what()}};
                emit(out, j);
                return kExitCheckFailed;
            }
        }

        if (*rsec) {
            json mdoc = load_json_file(rsecMatrix);
            require_schema(mdoc, nullptr);
            QuaternionicData Q = check_quaternionic(cmatrix_from_json(mdoc, bk));
            SectionAB s = section_ab_from_json(load_json_file(rsecSection), bk);
            bool real = is_real_section(Q, s);
            json j{{"schema", kSchemaTag}, {"kind", "real_section"}, {"real", real},
                   {"r_of_s", section_ab_to_json(induced_r(Q, s))}};
            emit(out, j);
            return kExitOk;
        }

        if (*tbuild) {
            FlatHK hk = standard_flat(tbuildN, bk);
            CMat raw = restrict_omega(hk);
            TwistorData D = make_twistor_data(quaternionic_from_tau(tbuildN, bk), raw);
            json j = twistor_data_to_json(D, raw, hk);
            if (tbuildOut.empty()) {
                emit(out, j);
            } else {
                std::ofstream f(tbuildOut);
                if (!f) fail(Errc::usage_error, "cannot write " + tbuildOut);
                f << j.dump(2) << "\n";
                err << "wrote " << tbuildOut << "\n";
            }
            return kExitOk;
        }

        if (*tcheck) {
            VerifyReport rep =
                twistor_flat_battery(tcheckN, bk, tcheckSamples, tcheckSeed, tcheckTol);
            emit(out, report_to_json(rep));
            err << (rep.pass() ? "all checks passed" : "CHECKS FAILED") << ", max residual "
                << rep.maxResidual() << "\n";
            return rep.pass() ? kExitOk : kExitCheckFailed;
        }

        if (*verify) {
            TwistorData D = twistor_data_from_json(load_json_file(verifyData), bk);
            VerifyReport rep = verify_suite(D, verifySamples, verifySeed, verifyTol);
            emit(out, report_to_json(rep));
            err << (rep.pass() ? "all checks passed" : "CHECKS FAILED") << ", max residual "
                << rep.maxResidual() << "\n";
            return rep.pass() ? kExitOk : kExitCheckFailed;
        }

        if (*met) {
            TwistorData D = twistor_data_from_json(load_json_file(metData), bk);
            CVec a = parseVectorLiteral(metA, bk);
            CVec b = parseVectorLiteral(metB, bk);
            Scalar v = metric(D, a, b);
            json j{{"schema", kSchemaTag}, {"kind", "metric"}, {"value", scalar_to_json(v)}};
            emit(out, j);
            return kExitOk;
        }

        if (*dscan) {
            if (bk != Backend::exact)
                fail(Errc::usage_error, "deform scan requires the exact backend");
            BundleFamily F = family_from_json(load_json_file(dFamily), Backend::exact);
            CVec special = parseSampleList(dSpecial, F.params(), Backend::exact).front();
            std::vector<CVec> samples = parseSampleList(dSamples, F.params(), Backend::exact);
            DeformationReport rep = semicontinuity_scan(F, special, samples, dTwist);
            auto sampleJson = [](const DeformationSample& smp) {
                json j{{"t", cvec_to_json(smp.t)}, {"h0", smp.h0}, {"h1", smp.h1},
                       {"splitting", smp.splitting.degrees}};
                return j;
            };
            json j{{"schema", kSchemaTag}, {"kind", "deformation_scan"},
                   {"special", sampleJson(rep.special)}, {"samples", json::array()},
                   {"semicontinuous", rep.semicontinuous},
                   {"euler_constant", rep.euler_constant}};
            for (const auto& smp : rep.samples) j["samples"].push_back(sampleJson(smp));
            emit(out, j);
            err << "semicontinuous: " << (rep.semicontinuous ? "yes" : "no") << "\n";
            return rep.semicontinuous && rep.euler_constant ? kExitOk : kExitCheckFailed;
        }

        if (*round) {
            RoundtripOutcome rt = runRoundtrip(roundN, bk, roundSamples, roundSeed, roundData,
                                               roundTol);
            emit(out, rt.doc);
            err << (rt.pass ? "roundtrip passed" : "ROUNDTRIP FAILED") << "\n";
            return rt.pass ? kExitOk : kExitCheckFailed;
        }

        fail(Errc::usage_error, "no subcommand selected");
    } catch (const Error& e) {
        json j{{"schema", kSchemaTag}, {"kind", "error"}, {"error", errc_name(e.code())},
               {"message", e.what()}};
        emit(out, j);
        err << e.what() << "\n";
        switch (e.code()) {
            case Errc::schema_error: return kExitSchema;
            case Errc::usage_error: return kExitUsage;
            default: return kExitCheckFailed;
        }
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}

} // namespace twistorkit
