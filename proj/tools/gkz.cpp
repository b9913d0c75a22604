// gkz: generate and numerically verify the hypergeometric system satisfied
// by Z(c) = ∫ exp(sum_k c_k x^k) dx.

#include "gkz/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

namespace {

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path);
    if (!in) throw gkz::InputError("cannot open input file '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<int>> parse_indices(const std::string& text) {
    std::vector<std::vector<int>> out;
    std::stringstream items(text);
    std::string item;
    while (std::getline(items, item, ';')) {
        std::vector<int> j;
        std::stringstream parts(item);
        std::string part;
        while (std::getline(parts, part, ',')) j.push_back(std::stoi(part));
        out.push_back(std::move(j));
    }
    return out;
}

void add_run_options(CLI::App& cmd, gkz::RunConfig& rc) {
    cmd.add_option("--tol", rc.quad_tol, "Relative quadrature tolerance")->envname("GKZ_TOL");
    cmd.add_option("--threads", rc.threads, "Worker threads (0 = all cores)")->envname("GKZ_THREADS");
    cmd.add_option("--contour", rc.contour, "auto, or ray pairs \"minus,plus;...\" in radians")
        ->envname("GKZ_CONTOUR");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hypergeometric system of the exponential-of-polynomial integral"};
    app.require_subcommand(1);

    gkz::RunConfig rc;
    std::string input;
    std::string indices;

    auto* system = app.add_subcommand("system", "Emit exponent matrix, lattice basis, Euler and toric operators");
    system->add_option("input", input, "Polynomial document (file path or - for stdin)");

    auto* integrate = app.add_subcommand("integrate", "Integrate Z over an admissible contour");
    integrate->add_option("input", input, "Polynomial document (file path or - for stdin)");
    add_run_options(*integrate, rc);

    auto* moments = app.add_subcommand("moments", "Integrate moments M_j (default: Z and every exponent)");
    moments->add_option("input", input, "Polynomial document (file path or - for stdin)");
    moments->add_option("--index", indices, "Multi-indices \"j1,j2;j1,j2;...\"");
    add_run_options(*moments, rc);

    auto* verify = app.add_subcommand("verify", "Verify the toric and Euler equations numerically");
    verify->add_option("input", input, "Polynomial document (file path or - for stdin)");
    add_run_options(*verify, rc);
    verify->add_option("--fd-h", rc.fd_h_rel, "Relative finite-difference step")->envname("GKZ_FD_H");
    verify->add_option("--samples", rc.extra_lattice_samples, "Random lattice vectors beyond the basis")
        ->envname("GKZ_SAMPLES");
    verify->add_option("--l1-bound", rc.lattice_l1_bound, "l1 bound on sampled lattice vectors")
        ->envname("GKZ_L1_BOUND");
    verify->add_option("--seed", rc.seed, "Sampling seed")->envname("GKZ_SEED");
    verify->add_option("--tol-verify", rc.tol_verify, "Relative tolerance for Euler residuals")
        ->envname("GKZ_TOL_VERIFY");
    verify->add_option("--tol-fd-pair", rc.tol_fd_pair, "Relative tolerance for toric finite differences")
        ->envname("GKZ_TOL_FD_PAIR");
    verify->add_flag("--timing", rc.timing, "Include wall time in the report");
    verify->add_flag("--debug-alpha-zero", rc.debug_alpha_zero, "Replace <a,alpha> by 0 (mutation check)");

    auto* selftest = app.add_subcommand("selftest", "Compare the integrator against closed forms");
    add_run_options(*selftest, rc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    gkz::CommandResult result;
    try {
        if (app.got_subcommand(selftest)) {
            result = gkz::cmd_selftest(rc);
        } else {
            const std::string text = read_input(input);
            if (app.got_subcommand(system))
                result = gkz::cmd_system(text);
            else if (app.got_subcommand(integrate))
                result = gkz::cmd_integrate(text, rc);
            else if (app.got_subcommand(moments))
                result = gkz::cmd_moments(text, rc, indices.empty() ? std::vector<std::vector<int>>{}
                                                                    : parse_indices(indices));
            else
                result = gkz::cmd_verify(text, rc);
        }
    } catch (const std::exception& e) {
        std::cerr << "gkz: " << e.what() << "\n";
        return 3;
    }
    std::cout << gkz::render(result.document);
    if (result.document.contains("error"))
        std::cerr << "gkz: " << result.document["error"]["message"].get<std::string>() << "\n";
    return result.exit_code;
}
