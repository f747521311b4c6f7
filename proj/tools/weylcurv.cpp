#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"

#include "weylcurv/curvature.hpp"
#include "weylcurv/realization.hpp"
#include "weylcurv/serialize.hpp"

namespace {

using weylcurv::AffineJet;
using weylcurv::CurvatureModel;
using weylcurv::GaugeFunction;
using weylcurv::InnerProduct;
using weylcurv::Rational;
using weylcurv::TensorClass;
using weylcurv::WeylJet;

// Exit-code contract: 0 success/membership, 1 semantic failure, 2 parse or
// usage error, 3 degenerate metric.
constexpr int kOk = 0;
constexpr int kSemanticFailure = 1;
constexpr int kParseError = 2;
constexpr int kDegenerate = 3;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw weylcurv::ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw weylcurv::Error("cannot open '" + path + "' for writing");
    out << text;
}

std::string error_document(const std::string& command, const std::string& message,
                           const char* violated, const char* required_class) {
    nlohmann::ordered_json doc;
    doc["format_version"] = weylcurv::kFormatVersion;
    doc["kind"] = "error";
    doc["command"] = command;
    doc["message"] = message;
    if (violated) doc["violated"] = violated;
    if (required_class) doc["required_class"] = required_class;
    return doc.dump(2) + "\n";
}

int cmd_classify(const std::string& input) {
    CurvatureModel model = weylcurv::parse_model(read_input(input));
    auto report = weylcurv::symmetry_report(model.tensor(), model.h());
    std::cout << weylcurv::emit_symmetry_report(report, model.dim());
    return report.in_R ? kOk : kSemanticFailure;
}

int cmd_decompose(const std::string& input, const std::string& out) {
    CurvatureModel model = weylcurv::parse_model(read_input(input));
    try {
        auto [a1, psi] = weylcurv::higa_decompose(model);
        write_output(out, weylcurv::emit_decomposition(a1, psi));
        return kOk;
    } catch (const weylcurv::ClassError& e) {
        std::cout << error_document("decompose", e.what(),
                                    e.violated().empty() ? nullptr : e.violated().c_str(),
                                    nullptr);
        std::cerr << "decompose: " << e.what() << "\n";
        return kSemanticFailure;
    }
}

int cmd_realize(const std::string& input, const std::string& target, const std::string& out) {
    CurvatureModel model = weylcurv::parse_model(read_input(input));
    const char* required = target == "weyl"      ? "W"
                           : target == "riemann" ? "A"
                                                 : "R";
    try {
        if (target == "weyl") {
            WeylJet jet = weylcurv::weyl_realize(model);
            write_output(out, weylcurv::emit_jet(jet));
        } else if (target == "riemann") {
            // riemann_realize carries the class gate for this target; the
            // emitted jet is the same metric-only jet weyl_realize produces
            // for an algebraic model (phi = 0).
            if (!model.flags().in_A)
                weylcurv::riemann_realize(model.tensor(), model.h());
            WeylJet jet = weylcurv::weyl_realize(model);
            write_output(out, weylcurv::emit_jet(jet));
        } else {
            AffineJet jet{weylcurv::affine_realize(model.tensor(), model.h()), model};
            write_output(out, weylcurv::emit_jet(jet));
        }
        return kOk;
    } catch (const weylcurv::ClassError& e) {
        std::cout << error_document("realize",
                                    std::string(e.what()) + "; target '" + target +
                                        "' requires class " + required,
                                    e.violated().empty() ? nullptr : e.violated().c_str(),
                                    required);
        std::cerr << "realize: target '" << target << "' requires class " << required << ": "
                  << e.what() << "\n";
        return kSemanticFailure;
    }
}

int cmd_verify(const std::string& jet_path) {
    auto jet = weylcurv::parse_jet(read_input(jet_path));
    weylcurv::RealizationReport report;
    int dim = 0;
    if (std::holds_alternative<WeylJet>(jet)) {
        const auto& j = std::get<WeylJet>(jet);
        report = weylcurv::verify_realization(j);
        dim = j.dim();
    } else {
        const auto& j = std::get<AffineJet>(jet);
        report = weylcurv::verify_realization(j);
        dim = j.dim();
    }
    std::cout << weylcurv::emit_realization_report(report, dim);
    return report.success ? kOk : kSemanticFailure;
}

int cmd_gen(const std::string& cls, int dim, const std::string& signature, std::uint64_t seed,
            const std::string& out) {
    int p = -1, q = -1;
    {
        auto comma = signature.find(',');
        if (comma == std::string::npos)
            throw weylcurv::ParseError("--signature must be 'p,q'");
        try {
            p = std::stoi(signature.substr(0, comma));
            q = std::stoi(signature.substr(comma + 1));
        } catch (const std::exception&) {
            throw weylcurv::ParseError("--signature must be 'p,q'");
        }
    }
    if (p < 0 || q < 0 || p + q != dim)
        throw weylcurv::ParseError("signature must satisfy p, q >= 0 and p + q = dim");

    TensorClass tc = cls == "A"   ? TensorClass::AlgebraicCurvature
                     : cls == "W" ? TensorClass::WeylCurvature
                                  : TensorClass::GeneralizedCurvature;
    InnerProduct h = InnerProduct::from_signature(p, q);
    weylcurv::Tensor4 a = weylcurv::random_in_class(tc, dim, h, seed);
    CurvatureModel model(std::move(h), std::move(a));
    write_output(out, weylcurv::emit_model(model));
    return kOk;
}

int cmd_gauge(const std::string& jet_path, const std::string& f_path, const std::string& out) {
    auto jet = weylcurv::parse_jet(read_input(jet_path));
    if (!std::holds_alternative<WeylJet>(jet))
        throw weylcurv::ParseError("gauge transforms apply to Weyl jets, not affine jets");
    GaugeFunction f = weylcurv::parse_gauge(read_input(f_path));
    WeylJet transformed = weylcurv::gauge_transform(std::get<WeylJet>(jet), f);
    write_output(out, weylcurv::emit_jet(transformed));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvature model classification, decomposition and jet realization"};
    app.require_subcommand(1);

    std::string input, out, jet_path, f_path;
    std::string target = "weyl";
    std::string cls = "A";
    std::string signature;
    int dim = 0;
    std::uint64_t seed = 0;

    auto* classify = app.add_subcommand("classify", "report symmetry class membership");
    classify->add_option("input", input, "model JSON path, or - for stdin")->required();

    auto* decompose = app.add_subcommand("decompose", "split a Weyl tensor as A1 + sigma(psi)");
    decompose->add_option("input", input, "model JSON path, or - for stdin")->required();
    decompose->add_option("--out", out, "output path (default stdout)");

    auto* realize = app.add_subcommand("realize", "construct a realizing jet");
    realize->add_option("input", input, "model JSON path, or - for stdin")->required();
    realize->add_option("--target", target, "weyl | riemann | affine")
        ->check(CLI::IsMember({"weyl", "riemann", "affine"}));
    realize->add_option("--out", out, "output path (default stdout)");

    auto* verify = app.add_subcommand("verify", "verify a realization jet against its model");
    verify->add_option("--jet", jet_path, "jet JSON path, or - for stdin")->required();

    auto* gen = app.add_subcommand("gen", "generate a random model in a symmetry class");
    gen->add_option("--class", cls, "R | W | A")->check(CLI::IsMember({"R", "W", "A"}));
    gen->add_option("--dim", dim, "dimension n >= 2")->required();
    gen->add_option("--signature", signature, "p,q with p + q = dim")->required();
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--out", out, "output path (default stdout)");

    auto* gauge = app.add_subcommand("gauge", "apply a gauge transformation to a Weyl jet");
    gauge->add_option("--jet", jet_path, "jet JSON path, or - for stdin")->required();
    gauge->add_option("--f", f_path, "gauge function JSON path, or - for stdin")->required();
    gauge->add_option("--out", out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParseError;
    }

    try {
        if (app.got_subcommand(classify)) return cmd_classify(input);
        if (app.got_subcommand(decompose)) return cmd_decompose(input, out);
        if (app.got_subcommand(realize)) return cmd_realize(input, target, out);
        if (app.got_subcommand(verify)) return cmd_verify(jet_path);
        if (app.got_subcommand(gen)) return cmd_gen(cls, dim, signature, seed, out);
        if (app.got_subcommand(gauge)) return cmd_gauge(jet_path, f_path, out);
    } catch (const weylcurv::DegeneracyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDegenerate;
    } catch (const weylcurv::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const weylcurv::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const weylcurv::ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const weylcurv::ClassError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSemanticFailure;
    } catch (const weylcurv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSemanticFailure;
    }
    return kParseError;
}
