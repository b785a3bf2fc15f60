#include "jlc/cli.hpp"
#include "jlc/kernels.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Spectral toolkit for limit-circle Jacobi matrices"};
    jlc::RunConfig config;
    std::string command, z, window, t, omega, format = "json-lines", out;
    long long N = 400;

    app.add_option("--model", config.model_path, "model descriptor (JSON)")->required();
    app.add_option("--command", command, "classify|polys|gamma|eigs|measure|moments|jost|verify")->required();
    app.add_option("--z", z, "spectral points RE,IM[;RE,IM...]");
    app.add_option("--window", window, "eigenvalue window LO,HI");
    app.add_option("--t", t, "extension parameter (real or inf)");
    app.add_option("--omega", omega, "boundary parameter RE,IM with |omega| = 1");
    app.add_option("--N", N, "truncation / table length")->check(CLI::Range(4LL, 1LL << 24));
    app.add_option("--tol", config.tol, "tolerance");
    app.add_option("--grid", config.grid, "scan step");
    app.add_option("--n-max", config.n_max, "highest moment order")->check(CLI::Range(0, 64));
    app.add_option("--out", out, "output file (metadata goes to <out>.meta.json)");
    app.add_option("--format", format, "json-lines|csv");
    CLI11_PARSE(app, argc, argv);

    if (const char* env = std::getenv("JLC_THREADS")) {
        const int threads = std::atoi(env);
        if (threads <= 0) {
            std::cerr << "error: JLC_THREADS must be a positive integer\n";
            return 2;
        }
        jlc::set_thread_count(threads);
    }

    try {
        config.command = jlc::parse_command(command);
        config.format = jlc::parse_format(format);
        config.N = static_cast<jlc::Index>(N);
        if (!z.empty()) config.z_list = jlc::parse_z_list(z);
        if (!window.empty()) config.window = jlc::parse_window(window);
        if (!t.empty()) config.t = jlc::parse_t(t);
        if (!omega.empty()) config.omega = jlc::parse_complex(omega);
        if (!out.empty()) config.out = out;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return jlc::run(config, std::cout, std::cerr);
}
