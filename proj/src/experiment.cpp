#include "xbar/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>
#include <random>
#include <thread>

#include "xbar/errors.hpp"
#include "xbar/weight_file.hpp"

namespace xbar {

namespace {

constexpr std::uint64_t kWeightSalt = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kInputSalt = 0xc2b2ae3d27d4eb4fULL;

double uniform01(std::mt19937_64& eng) {
    return (static_cast<double>(eng() >> 11) + 1.0) * 0x1p-53;
}

std::string fmt_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

int worker_count(int n_trials) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("XBAR_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    }
    if (static_cast<int>(n) > n_trials) n = static_cast<unsigned>(n_trials);
    return static_cast<int>(n);
}

}  // namespace

IntMatrix trial_weights(const ExperimentConfig& cfg, std::uint64_t seed) {
    const int weight_cols = cfg.array_cols / cfg.weight_bits;
    if (cfg.weight_source.kind == WeightSource::Kind::File) {
        const WeightFile wf = read_weight_file(cfg.weight_source.path);
        if (wf.weights.rows != cfg.array_rows || wf.weights.cols != weight_cols ||
            wf.bits != cfg.weight_bits || wf.is_signed != cfg.signed_weights)
            throw ValidationError("weight file shape disagrees with the config");
        return wf.weights;
    }

    std::mt19937_64 eng(seed ^ kWeightSalt);
    IntMatrix w(cfg.array_rows, weight_cols);
    const long long wrap = 1LL << cfg.weight_bits;
    for (int r = 0; r < cfg.array_rows; ++r) {
        for (int c = 0; c < weight_cols; ++c) {
            long long pattern = 0;
            for (int k = 0; k < cfg.weight_bits; ++k)
                if (uniform01(eng) < cfg.weight_source.density) pattern |= 1LL << k;
            if (cfg.signed_weights && pattern >= wrap / 2) pattern -= wrap;
            w.at(r, c) = pattern;
        }
    }
    return w;
}

std::vector<long long> trial_inputs(const ExperimentConfig& cfg, std::uint64_t seed) {
    std::vector<long long> x(cfg.array_rows);
    const long long top = (1LL << cfg.input_bits) - 1;

    switch (cfg.input_source.kind) {
        case InputSource::Kind::AllOnes:
            for (auto& v : x) v = top;
            return x;
        case InputSource::Kind::Random: {
            std::mt19937_64 eng(seed ^ kInputSalt);
            for (auto& v : x) v = static_cast<long long>(eng() & static_cast<std::uint64_t>(top));
            return x;
        }
        case InputSource::Kind::File: {
            std::ifstream in(cfg.input_source.path);
            if (!in)
                throw ValidationError("cannot open input file: " + cfg.input_source.path);
            for (int r = 0; r < cfg.array_rows; ++r)
                if (!(in >> x[r]))
                    throw ValidationError("input file " + cfg.input_source.path +
                                          ": expected " + std::to_string(cfg.array_rows) +
                                          " values");
            for (long long v : x)
                if (v < 0 || v > top)
                    throw ValidationError("input file value " + std::to_string(v) +
                                          " not representable in " +
                                          std::to_string(cfg.input_bits) + " bits");
            return x;
        }
    }
    throw ValidationError("input source kind not handled");
}

std::vector<TrialRow> run_experiments(const ExperimentConfig& cfg) {
    cfg.validate();
    const WireModel wire = effective_wire_model(cfg);
    const CellTechnology tech = effective_technology(cfg);

    std::vector<TrialAxes> axes;
    int index = 0;
    for (const Mapping m : cfg.mappings)
        for (const ScheduleSpec& s : cfg.schedules)
            for (const double sg : cfg.sigmas)
                for (const std::uint64_t seed : cfg.seeds)
                    axes.push_back({index++, m, s, sg, seed});

    std::vector<TrialRow> rows(axes.size());

    auto run_one = [&](int i) {
        TrialRow row;
        row.axes = axes[i];
        try {
            MvmSetup setup;
            setup.weights = trial_weights(cfg, axes[i].seed);
            setup.bits_per_weight = cfg.weight_bits;
            setup.signed_weights = cfg.signed_weights;
            setup.mapping = axes[i].mapping;
            setup.wire = wire;
            setup.tech = tech;
            setup.bias = cfg.bias;
            setup.sigma = axes[i].sigma;
            setup.seed = axes[i].seed;

            CrossbarInstance xbar = build_crossbar(setup);
            const auto schedule =
                make_groups(cfg.array_rows, axes[i].schedule.groups, axes[i].schedule.strategy);
            const auto x = trial_inputs(cfg, axes[i].seed);

            const MvmReport rep =
                mvm_execute(setup, xbar, x, cfg.input_bits, schedule, cfg.adc);

            row.ok = true;
            row.mean_abs_err = rep.mean_abs_err;
            row.mean_analog_err = rep.mean_analog_err;
            row.rmse = rep.rmse;
            row.max_err = rep.max_err;
            for (long long v : rep.ideal) row.total_ideal += v;
            for (long long v : rep.measured) row.total_measured += v;
            for (double a : rep.analog_currents) row.total_analog_a += a;
            row.newton_iters_total = rep.newton_iters_total;
            row.newton_iters_max = rep.newton_iters_max;
            row.max_residual_a = rep.max_residual;
        } catch (const SimError& e) {
            row.ok = false;
            row.message = e.what();
        }
        rows[i] = std::move(row);
    };

    const int workers = worker_count(static_cast<int>(axes.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < axes.size(); ++i) run_one(static_cast<int>(i));
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < static_cast<int>(axes.size());
                     i = next.fetch_add(1))
                    run_one(i);
            });
        for (auto& t : pool) t.join();
    }
    return rows;
}

std::string csv_header() {
    return "trial,technology,rows,cols,weight_bits,signed_weights,input_bits,mapping,"
           "schedule,groups,sigma,seed,status,mean_abs_err,mean_analog_err,rmse,max_err,"
           "total_ideal,"
           "total_measured,total_analog_a,newton_iters_total,newton_iters_max,"
           "max_residual_a,message";
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg,
               const std::vector<TrialRow>& rows, bool deterministic) {
    if (!deterministic) {
        const std::time_t now = std::chrono::system_clock::to_time_t(
            std::chrono::system_clock::now());
        char stamp[32];
        std::tm tm_utc{};
        gmtime_r(&now, &tm_utc);
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
        out << "# generated at " << stamp << '\n';
    }
    out << csv_header() << '\n';

    for (const TrialRow& r : rows) {
        out << r.axes.index << ',' << tech_name(cfg.technology) << ',' << cfg.array_rows
            << ',' << cfg.array_cols << ',' << cfg.weight_bits << ','
            << (cfg.signed_weights ? 1 : 0) << ',' << cfg.input_bits << ','
            << mapping_name(r.axes.mapping) << ',' << strategy_name(r.axes.schedule.strategy)
            << ',' << r.axes.schedule.groups << ',' << fmt_double(r.axes.sigma) << ','
            << r.axes.seed << ',';
        if (r.ok) {
            out << "ok," << fmt_double(r.mean_abs_err) << ','
                << fmt_double(r.mean_analog_err) << ',' << fmt_double(r.rmse) << ','
                << r.max_err << ',' << r.total_ideal << ',' << r.total_measured << ','
                << fmt_double(r.total_analog_a) << ',' << r.newton_iters_total << ','
                << r.newton_iters_max << ',' << fmt_double(r.max_residual_a) << ',';
        } else {
            out << "error,,,,,,,,,,," << sanitize(r.message);
        }
        out << '\n';
    }
}

}  // namespace xbar
