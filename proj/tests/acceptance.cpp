// Acceptance suite. Every criterion runs in exact rational arithmetic and
// prints one pass/fail line; the process exits nonzero if any criterion
// fails. The CLI binary path is argv[1] (criterion 9).

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "weylcurv/curvature.hpp"
#include "weylcurv/realization.hpp"
#include "weylcurv/serialize.hpp"

using namespace weylcurv;

namespace {

namespace fs = std::filesystem;

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const std::string& msg) { g_notes.push_back(msg); }

void criterion(int number, const std::string& label, const std::function<bool()>& body) {
    g_notes.clear();
    bool ok = false;
    try {
        ok = body();
    } catch (const std::exception& e) {
        note(std::string("exception: ") + e.what());
        ok = false;
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << label
              << "\n";
    if (!ok) {
        ++g_failures;
        for (const auto& m : g_notes) std::cout << "        " << m << "\n";
    }
}

InnerProduct signature_for(int n, bool lorentzian) {
    return lorentzian ? InnerProduct::from_signature(n - 1, 1)
                      : InnerProduct::from_signature(n, 0);
}

// -------- criterion bodies --------

bool sigma_splitting() {
    int checked = 0;
    std::uint64_t seed = 1000;
    for (int n = 2; n <= 6; ++n)
        for (int lor = 0; lor < 2; ++lor) {
            InnerProduct h = signature_for(n, lor == 1);
            for (int rep = 0; rep < 20; ++rep) {
                TwoForm psi = random_two_form(n, seed++);
                TwoForm lam = alt_ricci(sigma(psi, h), h);
                if (lam != Rational(-n) * psi) {
                    note("altRic(sigma(psi)) != -n psi at n=" + std::to_string(n));
                    return false;
                }
                ++checked;
            }
        }
    if (checked < 200) {
        note("only " + std::to_string(checked) + " instances checked");
        return false;
    }
    return true;
}

bool higa_decomposition() {
    int checked = 0;
    std::uint64_t seed = 2000;
    for (int n = 2; n <= 6; ++n)
        for (int lor = 0; lor < 2; ++lor) {
            InnerProduct h = signature_for(n, lor == 1);
            for (int rep = 0; rep < 20; ++rep) {
                Tensor4 a = random_in_class(TensorClass::WeylCurvature, n, h, seed++);
                TwoForm psi = Rational(-1, n) * alt_ricci(a, h);
                Tensor4 a1 = a - sigma(psi, h);
                if (!classify(a1, h).in_A) {
                    note("A - sigma(-(1/n) altRic A) is not algebraic");
                    return false;
                }
                if (a1 + sigma(psi, h) != a) {
                    note("reassembly A1 + sigma(psi) != A");
                    return false;
                }
                auto [a2, psi2] = higa_decompose(CurvatureModel(h, a1));
                if (a2 != a1 || max_abs(psi2) != Rational(0)) {
                    note("decomposition of A1 is not (A1, 0)");
                    return false;
                }
                ++checked;
            }
        }
    if (checked < 200) {
        note("only " + std::to_string(checked) + " instances checked");
        return false;
    }
    return true;
}

bool class_tower() {
    std::uint64_t seed = 3000;
    for (int n = 2; n <= 5; ++n)
        for (int lor = 0; lor < 2; ++lor) {
            InnerProduct h = signature_for(n, lor == 1);
            for (int rep = 0; rep < 8; ++rep) {
                Tensor4 a = random_in_class(TensorClass::AlgebraicCurvature, n, h, seed++);
                auto ar = symmetry_report(a, h);
                bool all_five = scalar_traits<Rational>::is_zero(ar.eq_1b) &&
                                scalar_traits<Rational>::is_zero(ar.eq_1c) &&
                                scalar_traits<Rational>::is_zero(ar.eq_1d) &&
                                scalar_traits<Rational>::is_zero(ar.eq_1e) &&
                                scalar_traits<Rational>::is_zero(ar.eq_1f);
                if (!all_five) {
                    note("generated algebraic tensor fails a residual");
                    return false;
                }
                Tensor4 w = random_in_class(TensorClass::WeylCurvature, n, h, seed++);
                auto wr = symmetry_report(w, h);
                if (!(wr.in_R && wr.in_W)) {
                    note("generated weyl tensor fails 1b/1c/1d");
                    return false;
                }
                TwoForm psi = random_two_form(n, seed++);
                if (max_abs(psi) == Rational(0)) continue;
                Tensor4 res = residual_pair_antisym34(sigma(psi, h));
                bool matches = true;
                for (int i = 0; i < n && matches; ++i)
                    for (int j = 0; j < n && matches; ++j)
                        for (int k = 0; k < n && matches; ++k)
                            for (int l = 0; l < n && matches; ++l)
                                if (res(i, j, k, l) !=
                                    Rational(4) * psi(i, j) * h.matrix()(k, l))
                                    matches = false;
                if (!matches) {
                    note("sigma pair residual is not 4 psi_ij eps_kl");
                    return false;
                }
                bool nonzero = false;
                for (int i = 0; i < n && !nonzero; ++i)
                    for (int j = 0; j < n && !nonzero; ++j)
                        if (psi(i, j).sign() != 0) {
                            for (int k = 0; k < n; ++k)
                                if (res(i, j, k, k).sign() != 0) {
                                    nonzero = true;
                                    break;
                                }
                        }
                if (!nonzero) {
                    note("sigma of a nonzero form passed the 1e residual");
                    return false;
                }
            }
        }
    return true;
}

bool realization_theorem() {
    int checked = 0;
    std::uint64_t seed = 4000;
    for (int n = 2; n <= 4; ++n)
        for (int lor = 0; lor < 2; ++lor) {
            InnerProduct h = signature_for(n, lor == 1);
            for (int rep = 0; rep < 17; ++rep) {
                CurvatureModel model(
                    h, random_in_class(TensorClass::WeylCurvature, n, h, seed++));
                WeylJet jet = weyl_realize(model);
                RealizationReport r = verify_realization(jet);
                if (r.max_abs_difference != Rational(0)) {
                    note("curvature at origin differs from the model tensor");
                    return false;
                }
                if (*r.compatibility_max != Rational(0)) {
                    note("compatibility residual is nonzero");
                    return false;
                }
                if (r.torsion_max != Rational(0)) {
                    note("torsion residual is nonzero");
                    return false;
                }
                ++checked;
            }
        }
    if (checked < 100) {
        note("only " + std::to_string(checked) + " models checked");
        return false;
    }
    return true;
}

bool calibration() {
    if (kMetricAnsatzNum != 1 || kMetricAnsatzDen != 6) {
        note("metric ansatz constant was altered (expected 1/6)");
        return false;
    }
    if (kAffineAnsatzNum != 1 || kAffineAnsatzDen != 3) {
        note("affine ansatz constant was altered (expected 1/3)");
        return false;
    }
    std::uint64_t seed = 5000;
    for (int rep = 0; rep < 50; ++rep) {
        int n = 2 + rep % 3;
        InnerProduct h = signature_for(n, rep % 2 == 1);
        Tensor4 a1 = random_in_class(TensorClass::AlgebraicCurvature, n, h, seed++);
        if (curvature_at_origin(levi_civita_christoffels(riemann_realize(a1, h))) != a1) {
            note("metric realization round trip failed");
            return false;
        }
        Tensor4 a = random_in_class(TensorClass::GeneralizedCurvature, n, h, seed++);
        if (curvature_at_origin(affine_realize(a, h)) != a) {
            note("affine realization round trip failed");
            return false;
        }
    }
    // sign sensitivity: flipping either constant breaks the round trip
    {
        InnerProduct h = signature_for(2, false);
        Tensor4 a(2);
        a(0, 1, 0, 1) = Rational(1);
        a(1, 0, 1, 0) = Rational(1);
        a(0, 1, 1, 0) = Rational(-1);
        a(1, 0, 0, 1) = Rational(-1);
        MetricJet m = riemann_realize(a, h);
        MetricJet flipped = m;
        flipped.quad *= Rational(-1);
        if (curvature_at_origin(levi_civita_christoffels(flipped)) == a) {
            note("sign flip of the metric ansatz went unnoticed");
            return false;
        }
        ConnectionJet c = affine_realize(a, h);
        ConnectionJet cf = c;
        cf.linear *= Rational(-1);
        if (curvature_at_origin(cf) == a) {
            note("sign flip of the affine ansatz went unnoticed");
            return false;
        }
    }
    // phi convention: the realized jet's dphi equals the decomposition form
    {
        InnerProduct h = signature_for(3, false);
        CurvatureModel model(h, random_in_class(TensorClass::WeylCurvature, 3, h, 777));
        auto [a1, psi] = higa_decompose(model);
        WeylJet jet = weyl_realize(model);
        if (dphi(jet.phi) != psi) {
            note("phi coefficient convention does not match the splitting form");
            return false;
        }
    }
    return true;
}

bool dphi_relation() {
    std::uint64_t seed = 6000;
    for (int n = 2; n <= 4; ++n)
        for (int lor = 0; lor < 2; ++lor) {
            InnerProduct h = signature_for(n, lor == 1);
            for (int rep = 0; rep < 17; ++rep) {
                CurvatureModel model(
                    h, random_in_class(TensorClass::WeylCurvature, n, h, seed++));
                WeylJet jet = weyl_realize(model);
                Tensor4 r0 = curvature_at_origin(jet.conn);
                TwoForm lam = alt_ricci(r0, h);
                if (dphi(jet.phi) != Rational(-1, n) * lam) {
                    note("dphi != -(1/n) altRic(R(0))");
                    return false;
                }
            }
        }
    return true;
}

bool conjugate_bianchi() {
    int checked = 0;
    std::uint64_t seed = 7000;
    for (int n = 2; n <= 6; ++n)
        for (int lor = 0; lor < 2; ++lor) {
            InnerProduct h = signature_for(n, lor == 1);
            for (int rep = 0; rep < 10; ++rep) {
                TwoForm psi = random_two_form(n, seed++);
                Tensor4 lhs = residual_bianchi(conjugate(sigma(psi, h)));
                if (lhs != conjugate_bianchi_residual_closed_form(psi, h)) {
                    note("closed form mismatch at n=" + std::to_string(n));
                    return false;
                }
                if (n >= 3 && max_abs(psi) != Rational(0) && max_abs(lhs) == Rational(0)) {
                    note("residual vanished for nonzero psi, n >= 3");
                    return false;
                }
                Tensor4 a = random_in_class(TensorClass::AlgebraicCurvature, n, h, seed++);
                if (max_abs(residual_bianchi(conjugate(a))) != Rational(0)) {
                    note("conjugate Bianchi residual nonzero on an algebraic tensor");
                    return false;
                }
                ++checked;
            }
        }
    return checked >= 100;
}

bool gauge_invariance() {
    std::uint64_t seed = 8000;
    std::mt19937_64 g(8001);
    int checked = 0;
    for (int n = 2; n <= 4; ++n)
        for (int lor = 0; lor < 2; ++lor) {
            InnerProduct h = signature_for(n, lor == 1);
            for (int rep = 0; rep < 17; ++rep) {
                CurvatureModel model(
                    h, random_in_class(TensorClass::WeylCurvature, n, h, seed++));
                WeylJet jet = weyl_realize(model);
                GaugeFunction f{std::vector<Rational>(static_cast<std::size_t>(n)),
                                Tensor2(n)};
                for (int a = 0; a < n; ++a)
                    f.linear[a] = Rational(static_cast<long>(g() % 7) - 3);
                for (int a = 0; a < n; ++a)
                    for (int b = a; b < n; ++b) {
                        Rational v(static_cast<long>(g() % 7) - 3);
                        f.quad(a, b) = v;
                        f.quad(b, a) = v;
                    }
                WeylJet gauged = gauge_transform(jet, f);
                if (compatibility_residual(gauged) != Rational(0)) {
                    note("compatibility broke under a gauge transform");
                    return false;
                }
                if (gauged.conn != jet.conn) {
                    note("gauge transform touched the connection");
                    return false;
                }
                ++checked;
            }
        }
    if (checked < 100) {
        note("only " + std::to_string(checked) + " pairs checked");
        return false;
    }
    // identity gauge
    InnerProduct h = signature_for(3, false);
    CurvatureModel model(h, random_in_class(TensorClass::WeylCurvature, 3, h, 8999));
    WeylJet jet = weyl_realize(model);
    GaugeFunction zero{std::vector<Rational>(3), Tensor2(3)};
    if (gauge_transform(jet, zero) != jet) {
        note("zero gauge function is not the identity");
        return false;
    }
    return true;
}

// -------- CLI pipeline --------

fs::path g_dir;
std::string g_cli;

int run_cli(const std::string& args, std::string* out_text = nullptr) {
    static int counter = 0;
    fs::path out = g_dir / ("out_" + std::to_string(counter++) + ".json");
    std::string cmd = g_cli + " " + args + " > " + out.string() + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    if (out_text) {
        std::ifstream in(out);
        std::ostringstream ss;
        ss << in.rdbuf();
        *out_text = ss.str();
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool cli_end_to_end() {
    if (g_cli.empty()) {
        note("CLI binary path missing (pass it as argv[1])");
        return false;
    }
    g_dir = fs::temp_directory_path() / ("weylcurv_acc_" + std::to_string(::getpid()));
    fs::create_directories(g_dir);

    int seed = 90;
    for (int n = 2; n <= 4; ++n)
        for (int lor = 0; lor < 2; ++lor) {
            std::string sig =
                std::to_string(lor ? n - 1 : n) + "," + std::to_string(lor ? 1 : 0);
            for (const std::string cls : {"R", "W", "A"}) {
                ++seed;
                fs::path model_path = g_dir / ("m_" + std::to_string(seed) + ".json");
                std::string gen_args = "gen --class " + cls + " --dim " + std::to_string(n) +
                                       " --signature " + sig + " --seed " +
                                       std::to_string(seed) + " --out " + model_path.string();
                if (run_cli(gen_args) != 0) {
                    note("gen failed: " + gen_args);
                    return false;
                }
                std::string gen_text;
                {
                    std::ifstream in(model_path);
                    std::ostringstream ss;
                    ss << in.rdbuf();
                    gen_text = ss.str();
                }
                // serialization round trip is bit-exact
                if (emit_model(parse_model(gen_text)) != gen_text) {
                    note("model round trip not byte-identical");
                    return false;
                }

                std::string classify_out;
                if (run_cli("classify " + model_path.string(), &classify_out) != 0) {
                    note("classify failed for class " + cls);
                    return false;
                }
                const char* want = cls == "A" ? "\"in_A\": true"
                                  : cls == "W" ? "\"in_W\": true"
                                               : "\"in_R\": true";
                if (classify_out.find(want) == std::string::npos) {
                    note("classify output missing " + std::string(want));
                    return false;
                }

                if (cls != "R") {
                    if (run_cli("decompose " + model_path.string()) != 0) {
                        note("decompose failed for class " + cls);
                        return false;
                    }
                }

                std::vector<std::string> targets;
                if (cls == "A")
                    targets = {"weyl", "riemann", "affine"};
                else if (cls == "W")
                    targets = {"weyl", "affine"};
                else
                    targets = {"affine"};
                for (const std::string& target : targets) {
                    fs::path jet_path =
                        g_dir / ("j_" + std::to_string(seed) + "_" + target + ".json");
                    if (run_cli("realize " + model_path.string() + " --target " + target +
                                " --out " + jet_path.string()) != 0) {
                        note("realize --target " + target + " failed for class " + cls);
                        return false;
                    }
                    std::string jet_text;
                    {
                        std::ifstream in(jet_path);
                        std::ostringstream ss;
                        ss << in.rdbuf();
                        jet_text = ss.str();
                    }
                    auto parsed = parse_jet(jet_text);
                    std::string reemitted = std::holds_alternative<WeylJet>(parsed)
                                                ? emit_jet(std::get<WeylJet>(parsed))
                                                : emit_jet(std::get<AffineJet>(parsed));
                    if (reemitted != jet_text) {
                        note("jet round trip not byte-identical");
                        return false;
                    }
                    std::string verify_out;
                    if (run_cli("verify --jet " + jet_path.string(), &verify_out) != 0) {
                        note("verify failed for target " + target + ", class " + cls);
                        return false;
                    }
                    if (verify_out.find("\"success\": true") == std::string::npos) {
                        note("verify report lacks success for target " + target);
                        return false;
                    }
                }
            }
        }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];

    criterion(1, "sigma splitting: altRic(sigma(psi)) = -n psi", sigma_splitting);
    criterion(2, "Higa decomposition splits, reassembles and is idempotent",
              higa_decomposition);
    criterion(3, "class tower residuals across generated classes", class_tower);
    criterion(4, "Weyl models realize exactly with zero residuals", realization_theorem);
    criterion(5, "ansatz constants reproduce both realizations", calibration);
    criterion(6, "dphi = -(1/n) altRic(R(0)) on realized jets", dphi_relation);
    criterion(7, "conjugate Bianchi residual closed form and vanishing", conjugate_bianchi);
    criterion(8, "gauge transforms preserve compatibility", gauge_invariance);
    criterion(9, "CLI gen/classify/decompose/realize/verify pipeline", cli_end_to_end);

    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all acceptance criteria passed\n";
    return 0;
}
