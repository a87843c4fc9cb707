// resil: resilience checks for joint Petri-net and graph-transformation models.

#include "resil/cli.hpp"
#include "resil/error.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

int emit(const resil::cli::Report& r) {
    std::cout << r.body.dump(2) << '\n';
    return r.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decide k-step resilience of well-structured joint transition systems"};
    app.require_subcommand(1);

    std::string path;
    auto* check = app.add_subcommand("check", "least k with the bad reachable states inside I^k");
    std::optional<std::size_t> k;
    bool trace = false;
    check->add_option("model", path, "model file")->required();
    check->add_option("--k", k, "also decide k-step resilience for this k");
    check->add_flag("--trace", trace, "report every basis B^k");

    auto* approx = app.add_subcommand("approx", "under- and over-approximations of k_min");
    std::optional<std::size_t> under;
    bool over = false;
    approx->add_option("model", path, "model file")->required();
    approx->add_option("--under", under, "forward exploration depth for k_under");
    approx->add_flag("--over", over, "compute k_over by saturation in the inverted system");

    auto* prestar = app.add_subcommand("prestar", "saturate the safety ideal to its fixpoint");
    prestar->add_option("model", path, "model file")->required();

    auto* post = app.add_subcommand("post", "minimized forward states up to a depth");
    std::size_t depth = 0;
    post->add_option("model", path, "model file")->required();
    post->add_option("--depth", depth, "exploration depth")->required();

    auto* compose = app.add_subcommand("compose", "merge sys and env parts into one owner-tagged model");
    compose->add_option("model", path, "model file with sys/env parts")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (compose->parsed()) {
            std::ifstream in(path);
            if (!in) throw resil::Error("cannot read " + path);
            resil::Json doc;
            try {
                doc = resil::Json::parse(in);
            } catch (const resil::Json::parse_error& e) {
                throw resil::ValidationError("", std::string("JSON parse error: ") + e.what());
            }
            return emit(resil::cli::compose(doc));
        }
        const auto model = resil::load_model(path);
        if (check->parsed()) return emit(resil::cli::check(model, {k, trace}));
        if (approx->parsed()) {
            if (!under && !over) throw resil::Error("approx needs --under L or --over");
            return emit(resil::cli::approx(model, {under, over}));
        }
        if (prestar->parsed()) return emit(resil::cli::prestar(model));
        return emit(resil::cli::post(model, depth));
    } catch (const resil::ValidationError& e) {
        for (const auto& d : e.diagnostics())
            std::cerr << "error: " << (d.location.empty() ? "/" : d.location) << ": " << d.message << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
