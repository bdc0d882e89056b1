// Batch front end: LTPF rate sweeps, degenerate-coding simulations over IDX
// datasets, encoding-degeneracy tables, and ensemble inspection. All runs
// are deterministic for a fixed seed regardless of thread count.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "qpatt/combinatorics.hpp"
#include "qpatt/ensemble.hpp"
#include "qpatt/ltpf.hpp"
#include "qpatt/mnist.hpp"
#include "qpatt/rates.hpp"
#include "qpatt/stream_rng.hpp"
#include "qpatt/synthetic.hpp"

namespace {

using json = nlohmann::ordered_json;

qpatt::ModKind parse_mod(const std::string& name) {
    if (name == "bpsk")
        return qpatt::ModKind::Bpsk;
    if (name == "bam")
        return qpatt::ModKind::Bam;
    throw CLI::ValidationError("--mod", "expected 'bpsk' or 'bam'");
}

qpatt::ClassifierKind parse_classifier(const std::string& name) {
    if (name == "centroid")
        return qpatt::ClassifierKind::NearestCentroid;
    if (name == "knn3")
        return qpatt::ClassifierKind::Knn3;
    throw CLI::ValidationError("--classifier", "expected 'centroid' or 'knn3'");
}

std::vector<double> parse_ns_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        out.push_back(std::stod(text.substr(pos, comma - pos)));
        if (comma == text.size())
            break;
        pos = comma + 1;
    }
    return out;
}

// content to --out when given, stdout otherwise; summary always on one line
void emit(const std::string& content, const std::string& out_path, const std::string& summary) {
    if (out_path.empty()) {
        std::cout << content;
        std::cerr << summary << "\n";
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open output file " + out_path);
        out << content;
        std::cout << summary << " -> " << out_path << "\n";
    }
}

json rate_point_json(const qpatt::RatePoint& p) {
    json row;
    row["eta"] = p.eta;
    row["ns"] = p.ns;
    const auto put = [&row](const char* key, const std::optional<double>& v) {
        if (v)
            row[key] = *v;
    };
    put("i_ab", p.i_ab);
    put("i_ae", p.i_ae);
    put("chi_ae", p.chi_ae);
    put("p_dec", p.p_dec);
    put("r_coll", p.r_coll);
    put("r_ind", p.r_ind);
    put("r_dim", p.r_dim);
    put("r_pr", p.r_pr);
    return row;
}

struct LtpfOptions {
    std::string scheme;
    std::string mod = "bpsk";
    std::string ns = "0.25";
    std::string eta = "0.5";
    std::string attack = "all";
    std::string format = "csv";
    std::string out;
    int threads = 0;
};

int run_ltpf(const LtpfOptions& opt) {
    const qpatt::ModKind kind = parse_mod(opt.mod);
    const auto etas = qpatt::parse_grid(opt.eta);
    const auto ns_list = parse_ns_list(opt.ns);
    const qpatt::LtpfScheme base =
        qpatt::parse_scheme(opt.scheme, qpatt::Modulation(kind, ns_list.front()));

    const auto evaluate = [&](double eta, double ns) -> qpatt::RatePoint {
        const qpatt::LtpfScheme scheme = base.with_mean_photons(ns);
        if (opt.attack == "all")
            return qpatt::ltpf_rate_point(scheme, eta);
        const double i_ab = qpatt::mutual_info_ab(scheme, eta);
        if (opt.attack == "coll") {
            const auto space = qpatt::build_image_space(scheme);
            const double chi = qpatt::holevo(space, qpatt::Priors::uniform(space.size()),
                                             qpatt::ChannelParams(eta, qpatt::ChannelSide::Eve));
            return qpatt::assemble(eta, ns, i_ab, {}, chi, {}, {});
        }
        if (opt.attack == "ind")
            return qpatt::assemble(eta, ns, i_ab, qpatt::mutual_info_ab(scheme, 1.0 - eta), {},
                                   {}, {});
        if (opt.attack == "pr")
            return qpatt::assemble(eta, ns, i_ab, {}, {}, qpatt::k_inference_prob(scheme, eta),
                                   {}, qpatt::mutual_info_ae_unbiased(scheme, eta));
        throw CLI::ValidationError("--attack", "expected all|coll|ind|pr");
    };

    const auto points = qpatt::sweep(evaluate, etas, ns_list, opt.threads);
    const std::string summary = "ltpf scheme " + opt.scheme + ": " +
                                std::to_string(points.size()) + " grid points";
    if (opt.format == "csv") {
        emit(qpatt::rates_to_csv(points), opt.out, summary);
    } else if (opt.format == "json") {
        json rows = json::array();
        for (const auto& p : points)
            rows.push_back(rate_point_json(p));
        emit(rows.dump(2) + "\n", opt.out, summary);
    } else {
        throw CLI::ValidationError("--format", "expected csv or json");
    }
    return 0;
}

struct EnsembleOptions {
    std::string ktpf;
    std::string scheme;
    std::string mod = "bpsk";
    double ns = 0.25;
    double eta = 1.0;
    std::string side = "bob";
    std::string out;
};

int run_ensemble_inspect(const EnsembleOptions& opt) {
    const qpatt::Modulation mod(parse_mod(opt.mod), opt.ns);
    if (opt.side != "bob" && opt.side != "eve")
        throw CLI::ValidationError("--side", "expected 'bob' or 'eve'");
    const qpatt::ChannelSide side =
        opt.side == "eve" ? qpatt::ChannelSide::Eve : qpatt::ChannelSide::Bob;
    const qpatt::ChannelParams channel(opt.eta, side);

    std::optional<qpatt::ImageSpace> space;
    if (!opt.ktpf.empty()) {
        const std::size_t colon = opt.ktpf.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--ktpf", "expected 'm:k'");
        space = qpatt::enumerate_ktpf(std::stoi(opt.ktpf.substr(0, colon)),
                                      std::stoi(opt.ktpf.substr(colon + 1)), mod);
    } else if (!opt.scheme.empty()) {
        space = qpatt::build_image_space(qpatt::parse_scheme(opt.scheme, mod));
    } else {
        throw CLI::ValidationError("ensemble inspect", "one of --ktpf/--scheme is required");
    }

    const qpatt::GramSpectrum spectrum = qpatt::gram(*space, channel);
    json doc;
    doc["n"] = space->size();
    doc["modes"] = space->modes();
    doc["eta"] = opt.eta;
    doc["side"] = opt.side;
    doc["effective_transmissivity"] = channel.effective_transmissivity();
    doc["ns"] = opt.ns;
    doc["modulation"] = opt.mod;
    json patterns = json::array();
    for (const auto& p : space->patterns())
        patterns.push_back(p.to_string());
    doc["patterns"] = patterns;
    json gram_rows = json::array();
    for (int i = 0; i < space->size(); ++i) {
        json row = json::array();
        for (int j = 0; j < space->size(); ++j)
            row.push_back(spectrum.gram()(i, j));
        gram_rows.push_back(row);
    }
    doc["gram"] = gram_rows;
    json eigenvalues = json::array();
    for (int i = 0; i < space->size(); ++i)
        eigenvalues.push_back(spectrum.eigenvalues()[i]);
    doc["eigenvalues"] = eigenvalues;
    doc["pgm_error"] = qpatt::pgm_error(*space, channel);
    doc["holevo_bits"] =
        qpatt::holevo(*space, qpatt::Priors::uniform(space->size()), channel);

    emit(doc.dump(2) + "\n", opt.out,
         "ensemble of " + std::to_string(space->size()) + " states inspected");
    return 0;
}

struct DegeneracyOptions {
    std::string m_range = "2:12";
    std::string out;
};

int run_degeneracy(const DegeneracyOptions& opt) {
    int m_lo = 0, m_hi = 0;
    const std::size_t colon = opt.m_range.find(':');
    if (colon == std::string::npos) {
        m_lo = m_hi = std::stoi(opt.m_range);
    } else {
        m_lo = std::stoi(opt.m_range.substr(0, colon));
        m_hi = std::stoi(opt.m_range.substr(colon + 1));
    }
    if (m_lo < 2 || m_hi < m_lo)
        throw CLI::ValidationError("--m", "expected M or LO:HI with 2 <= LO <= HI");

    std::string csv = "m,g_s,g_sk,g_k_given_s\n";
    for (int m = m_lo; m <= m_hi; ++m) {
        csv += std::to_string(m) + ',' + qpatt::degeneracy_S(m).str() + ',' +
               qpatt::degeneracy_SK(m).str() + ',' + qpatt::g_K_given_S(m).str() + '\n';
    }
    emit(csv, opt.out,
         "degeneracy table for m in [" + std::to_string(m_lo) + ", " + std::to_string(m_hi) +
             "]");
    return 0;
}

struct MnistOptions {
    std::string train_images, train_labels, test_images, test_labels;
    std::string synthetic_dir;
    int synthetic_train = 60000;
    int synthetic_eval = 10000;
    std::string eta = "0.6";
    std::string ns = "0.5";
    std::string mod = "bpsk";
    std::string classifier = "centroid";
    std::string attack = "sym";
    int threshold = 127;
    int eve_train_size = 10;
    int reps = 20;
    std::uint64_t seed = 42;
    int threads = 0;
    std::string format = "json";
    std::string out;
};

int run_mnist(const MnistOptions& opt) {
    std::string train_images = opt.train_images, train_labels = opt.train_labels;
    std::string test_images = opt.test_images, test_labels = opt.test_labels;
    if (!opt.synthetic_dir.empty()) {
        qpatt::write_synthetic_idx_files(opt.synthetic_dir, opt.synthetic_train,
                                         opt.synthetic_eval, opt.seed);
        train_images = opt.synthetic_dir + "/train-images-idx3-ubyte";
        train_labels = opt.synthetic_dir + "/train-labels-idx1-ubyte";
        test_images = opt.synthetic_dir + "/t10k-images-idx3-ubyte";
        test_labels = opt.synthetic_dir + "/t10k-labels-idx1-ubyte";
    }
    if (train_images.empty() || train_labels.empty() || test_images.empty() ||
        test_labels.empty())
        throw CLI::ValidationError(
            "mnist", "dataset required: --train-images/--train-labels/--test-images/"
                     "--test-labels, or --synthetic DIR");

    const qpatt::ModKind kind = parse_mod(opt.mod);
    const qpatt::ClassifierKind classifier = parse_classifier(opt.classifier);
    const auto etas = qpatt::parse_grid(opt.eta);
    const auto ns_list = parse_ns_list(opt.ns);
    if (opt.reps < 1)
        throw CLI::ValidationError("--reps", "must be >= 1");
    if (opt.attack != "sym" && opt.attack != "dim")
        throw CLI::ValidationError("--attack", "expected 'sym' or 'dim'");

    const auto training =
        qpatt::binarize_set(qpatt::load_idx(train_images, train_labels), opt.threshold);
    const auto eval =
        qpatt::binarize_set(qpatt::load_idx(test_images, test_labels), opt.threshold);

    struct Averaged {
        double eta, ns, i_ab, i_ae_sym, i_ae_dim;
        qpatt::ConfusionTable table_ab, table_ae_sym, table_ae_dim; // summed over reps
    };
    const auto merge = [](qpatt::ConfusionTable& into, const qpatt::ConfusionTable& from) {
        for (int a = 0; a < qpatt::ConfusionTable::kClasses; ++a)
            for (int b = 0; b < qpatt::ConfusionTable::kClasses; ++b)
                into.add(a, b, from.count(a, b));
    };
    std::vector<Averaged> rows;
    for (double eta : etas) {
        for (double ns : ns_list) {
            Averaged row{eta, ns, 0.0, 0.0, 0.0, {}, {}, {}};
            for (int rep = 0; rep < opt.reps; ++rep) {
                const std::uint64_t rep_seed = qpatt::derive_stream_key(
                    opt.seed, qpatt::rng_domain::repetition, static_cast<std::uint64_t>(rep));
                const auto point =
                    qpatt::attack_point(training, eval, eta, ns, kind, classifier,
                                        opt.eve_train_size, rep_seed, opt.threads);
                row.i_ab += point.i_ab;
                row.i_ae_sym += point.i_ae_sym;
                row.i_ae_dim += point.i_ae_dim;
                merge(row.table_ab, point.table_ab);
                merge(row.table_ae_sym, point.table_ae_sym);
                merge(row.table_ae_dim, point.table_ae_dim);
            }
            row.i_ab /= opt.reps;
            row.i_ae_sym /= opt.reps;
            row.i_ae_dim /= opt.reps;
            rows.push_back(std::move(row));
        }
    }

    const std::string summary = "degenerate-coding simulation: " + std::to_string(rows.size()) +
                                " grid points x " + std::to_string(opt.reps) + " repetitions";
    if (opt.format == "json") {
        const auto table_json = [](const qpatt::ConfusionTable& t) {
            json rows_out = json::array();
            for (int a = 0; a < qpatt::ConfusionTable::kClasses; ++a) {
                json r = json::array();
                for (int b = 0; b < qpatt::ConfusionTable::kClasses; ++b)
                    r.push_back(t.count(a, b));
                rows_out.push_back(r);
            }
            return rows_out;
        };
        json out_rows = json::array();
        for (const auto& r : rows) {
            json row;
            row["eta"] = r.eta;
            row["ns"] = r.ns;
            row["seed_count"] = opt.reps;
            row["i_ab"] = r.i_ab;
            row["i_ae"] = r.i_ae_sym;
            row["i_ae_dim"] = r.i_ae_dim;
            row["r_ind"] = r.i_ab - r.i_ae_sym;
            row["r_dim"] = r.i_ab - r.i_ae_dim;
            row["confusion_ab"] = table_json(r.table_ab);
            row["confusion_ae"] = table_json(r.table_ae_sym);
            row["confusion_ae_dim"] = table_json(r.table_ae_dim);
            out_rows.push_back(row);
        }
        emit((out_rows.size() == 1 ? out_rows.front() : out_rows).dump(2) + "\n", opt.out,
             summary);
    } else if (opt.format == "csv") {
        std::string csv = "eta,ns,i_ab,i_ae,rate,seed_count\n";
        for (const auto& r : rows) {
            const double i_ae = opt.attack == "dim" ? r.i_ae_dim : r.i_ae_sym;
            csv += qpatt::format_double(r.eta) + ',' + qpatt::format_double(r.ns) + ',' +
                   qpatt::format_double(r.i_ab) + ',' + qpatt::format_double(i_ae) + ',' +
                   qpatt::format_double(r.i_ab - i_ae) + ',' + std::to_string(opt.reps) + '\n';
        }
        emit(csv, opt.out, summary);
    } else {
        throw CLI::ValidationError("--format", "expected csv or json");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherent pattern communication simulator"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key-value config file; command-line flags take precedence");

    LtpfOptions ltpf;
    auto* ltpf_cmd = app.add_subcommand("ltpf", "secure-rate sweep for an LTPF scheme");
    ltpf_cmd->add_option("--scheme", ltpf.scheme, "block layout, e.g. 3:1,5:2,3:1")->required();
    ltpf_cmd->add_option("--mod", ltpf.mod, "bpsk|bam");
    ltpf_cmd->add_option("--ns", ltpf.ns, "mean photon numbers, comma separated");
    ltpf_cmd->add_option("--eta", ltpf.eta, "transmissivity value or start:stop:count");
    ltpf_cmd->add_option("--attack", ltpf.attack, "all|coll|ind|pr");
    ltpf_cmd->add_option("--threads", ltpf.threads, "worker threads (0 = hardware)");
    ltpf_cmd->add_option("--format", ltpf.format, "csv|json");
    ltpf_cmd->add_option("--out", ltpf.out, "output path (stdout when omitted)");

    EnsembleOptions ens;
    auto* ensemble_cmd = app.add_subcommand("ensemble", "ensemble-level diagnostics");
    ensemble_cmd->require_subcommand(1);
    auto* inspect_cmd = ensemble_cmd->add_subcommand(
        "inspect", "Gram matrix, spectrum, discrimination error and Holevo bits as JSON");
    inspect_cmd->add_option("--ktpf", ens.ktpf, "fixed-weight space 'm:k'");
    inspect_cmd->add_option("--scheme", ens.scheme, "LTPF scheme, e.g. 3:1,5:2,3:1");
    inspect_cmd->add_option("--mod", ens.mod, "bpsk|bam");
    inspect_cmd->add_option("--ns", ens.ns, "mean photon number");
    inspect_cmd->add_option("--eta", ens.eta, "channel transmissivity");
    inspect_cmd->add_option("--side", ens.side, "bob|eve");
    inspect_cmd->add_option("--out", ens.out, "output path (stdout when omitted)");

    DegeneracyOptions deg;
    auto* deg_cmd = app.add_subcommand("degeneracy", "encoding-degeneracy table as CSV");
    deg_cmd->add_option("--m", deg.m_range, "mode count M or range LO:HI");
    deg_cmd->add_option("--out", deg.out, "output path (stdout when omitted)");

    MnistOptions mnist;
    auto* mnist_cmd =
        app.add_subcommand("mnist", "degenerate-coding rates over an IDX image dataset");
    mnist_cmd->add_option("--train-images", mnist.train_images, "IDX training images");
    mnist_cmd->add_option("--train-labels", mnist.train_labels, "IDX training labels");
    mnist_cmd->add_option("--test-images", mnist.test_images, "IDX evaluation images");
    mnist_cmd->add_option("--test-labels", mnist.test_labels, "IDX evaluation labels");
    mnist_cmd->add_option("--synthetic", mnist.synthetic_dir,
                          "generate a synthetic digit dataset into DIR and use it");
    mnist_cmd->add_option("--synthetic-train", mnist.synthetic_train,
                          "synthetic training set size");
    mnist_cmd->add_option("--synthetic-eval", mnist.synthetic_eval,
                          "synthetic evaluation set size");
    mnist_cmd->add_option("--eta", mnist.eta, "transmissivity value or start:stop:count");
    mnist_cmd->add_option("--ns", mnist.ns, "mean photon numbers, comma separated");
    mnist_cmd->add_option("--mod", mnist.mod, "bpsk|bam");
    mnist_cmd->add_option("--classifier", mnist.classifier, "centroid|knn3");
    mnist_cmd->add_option("--attack", mnist.attack, "sym|dim (rate column of CSV output)");
    mnist_cmd->add_option("--threshold", mnist.threshold, "binarization threshold 0..255");
    mnist_cmd->add_option("--eve-train-size", mnist.eve_train_size,
                          "interceptor training subset size (>= 10, stratified)");
    mnist_cmd->add_option("--reps", mnist.reps, "repetitions to average");
    mnist_cmd->add_option("--seed", mnist.seed, "base seed");
    mnist_cmd->add_option("--threads", mnist.threads, "worker threads (0 = hardware)");
    mnist_cmd->add_option("--format", mnist.format, "json|csv");
    mnist_cmd->add_option("--out", mnist.out, "output path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(ltpf_cmd))
            return run_ltpf(ltpf);
        if (app.got_subcommand(ensemble_cmd))
            return run_ensemble_inspect(ens);
        if (app.got_subcommand(deg_cmd))
            return run_degeneracy(deg);
        if (app.got_subcommand(mnist_cmd))
            return run_mnist(mnist);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
