#include "causal/citest.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "causal/errors.hpp"

namespace causal {

namespace {

void check_query(const CiQuery& q, int var_count) {
    auto check = [&](int v) {
        if (v < 0 || v >= var_count) throw std::invalid_argument("unknown node");
    };
    check(q.x);
    check(q.y);
    if (q.x == q.y) throw std::invalid_argument("x and y must differ");
    for (int v : q.s) {
        check(v);
        if (v == q.x || v == q.y)
            throw std::invalid_argument("conditioning set contains an endpoint");
    }
}

std::tuple<int, int, std::vector<int>> canonical(const CiQuery& q) {
    std::vector<int> s = q.s;
    std::sort(s.begin(), s.end());
    return {std::min(q.x, q.y), std::max(q.x, q.y), std::move(s)};
}

}  // namespace

void GaussianDataset::validate() const {
    const auto p = static_cast<Eigen::Index>(variables.size());
    if (sample_count <= 0) throw std::invalid_argument("sample_count must be positive");
    if (correlation.rows() != p || correlation.cols() != p)
        throw std::invalid_argument("correlation matrix shape mismatch");
    for (Eigen::Index i = 0; i < p; ++i) {
        if (std::abs(correlation(i, i) - 1.0) > 1e-8)
            throw std::invalid_argument("correlation diagonal must be 1");
        for (Eigen::Index j = 0; j < p; ++j) {
            if (std::abs(correlation(i, j) - correlation(j, i)) > 1e-8)
                throw std::invalid_argument("correlation matrix must be symmetric");
            if (correlation(i, j) < -1.0 - 1e-8 || correlation(i, j) > 1.0 + 1e-8)
                throw std::invalid_argument("correlation out of [-1,1]");
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(correlation);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw std::invalid_argument("correlation matrix not PSD");
}

GaussianDataset GaussianDataset::from_raw(std::vector<std::string> variables,
                                          const Eigen::MatrixXd& data) {
    const auto p = static_cast<Eigen::Index>(variables.size());
    if (data.cols() != p) throw std::invalid_argument("column count mismatch");
    if (data.rows() < 2) throw std::invalid_argument("need at least two samples");
    Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered / double(data.rows() - 1);
    Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
    GaussianDataset out;
    out.sample_count = data.rows();
    out.variables = std::move(variables);
    out.correlation = Eigen::MatrixXd(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j) {
            double denom = sd(i) * sd(j);
            if (denom <= 0.0)
                throw degenerate_covariance_error("constant column '" +
                                                  out.variables[i] + "'");
            out.correlation(i, j) = i == j ? 1.0 : cov(i, j) / denom;
        }
    return out;
}

GaussianDataset GaussianDataset::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty CSV");
    std::vector<std::string> names;
    {
        std::istringstream hdr(line);
        std::string cell;
        while (std::getline(hdr, cell, ',')) names.push_back(cell);
    }
    if (names.empty()) throw parse_error("CSV header has no columns");
    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::size_t cols = 0;
        while (std::getline(row, cell, ',')) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(cell, &used));
                if (used != cell.size() && cell.find_first_not_of(" \t\r", used) !=
                                               std::string::npos)
                    throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw parse_error("bad numeric cell '" + cell + "'");
            }
            ++cols;
        }
        if (cols != names.size())
            throw parse_error("row " + std::to_string(rows + 2) + " has " +
                              std::to_string(cols) + " cells, expected " +
                              std::to_string(names.size()));
        ++rows;
    }
    if (rows < 2) throw parse_error("CSV needs at least two data rows");
    Eigen::MatrixXd data(rows, names.size());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < names.size(); ++c)
            data(r, c) = values[r * names.size() + c];
    return from_raw(std::move(names), data);
}

GaussianDataset GaussianDataset::from_correlation_file(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    GaussianDataset out;
    if (!std::getline(in, line) || line.rfind("n:", 0) != 0)
        throw parse_error("correlation file must start with 'n: <samples>'");
    try {
        out.sample_count = std::stoll(line.substr(2));
    } catch (const std::exception&) {
        throw parse_error("bad sample count '" + line + "'");
    }
    if (!std::getline(in, line)) throw parse_error("missing variable names line");
    {
        std::istringstream hdr(line);
        std::string cell;
        while (std::getline(hdr, cell, ',')) out.variables.push_back(cell);
    }
    const auto p = static_cast<Eigen::Index>(out.variables.size());
    out.correlation = Eigen::MatrixXd(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        if (!std::getline(in, line))
            throw parse_error("missing correlation row " + std::to_string(i + 1));
        std::istringstream row(line);
        for (Eigen::Index j = 0; j < p; ++j)
            if (!(row >> out.correlation(i, j)))
                throw parse_error("bad correlation row " + std::to_string(i + 1));
    }
    out.validate();
    return out;
}

std::string GaussianDataset::to_correlation_file() const {
    std::ostringstream out;
    out << "n: " << sample_count << "\n";
    for (std::size_t i = 0; i < variables.size(); ++i)
        out << (i ? "," : "") << variables[i];
    out << "\n";
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < correlation.rows(); ++i) {
        for (Eigen::Index j = 0; j < correlation.cols(); ++j)
            out << (j ? " " : "") << correlation(i, j);
        out << "\n";
    }
    return out.str();
}

CiDecision oracle_answer(const Dag& g, const CiQuery& q) {
    check_query(q, g.node_count());
    return CiDecision{d_separated(g, q.x, q.y, q.s), std::nullopt, std::nullopt};
}

double partial_correlation(const GaussianDataset& d, const CiQuery& q) {
    const auto p = static_cast<int>(d.variables.size());
    check_query(q, p);
    const int k = static_cast<int>(q.s.size()) + 2;
    if (k > p) throw std::invalid_argument("conditioning set too large");

    std::vector<int> idx;
    idx.reserve(k);
    idx.push_back(q.x);
    idx.push_back(q.y);
    idx.insert(idx.end(), q.s.begin(), q.s.end());
    Eigen::MatrixXd sub(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = d.correlation(idx[i], idx[j]);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible())
        throw degenerate_covariance_error("singular correlation submatrix");
    Eigen::MatrixXd prec = lu.inverse();
    double r = -prec(0, 1) / std::sqrt(prec(0, 0) * prec(1, 1));
    return std::clamp(r, -1.0, 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

CiDecision fisher_z_test(const GaussianDataset& d, const CiQuery& q, double alpha) {
    const auto df = d.sample_count - static_cast<std::int64_t>(q.s.size()) - 3;
    if (df < 1)
        throw std::invalid_argument(
            "sample too small for conditioning set of size " +
            std::to_string(q.s.size()));
    double r = partial_correlation(d, q);
    constexpr double kCap = 1.0 - 1e-12;
    r = std::clamp(r, -kCap, kCap);
    const double z = 0.5 * std::log((1.0 + r) / (1.0 - r));
    const double statistic = std::sqrt(double(df)) * std::abs(z);
    const double p_value = std::erfc(statistic / std::sqrt(2.0));  // 2(1 - Phi)
    return CiDecision{p_value > alpha, p_value, statistic};
}

void FactTable::add(int x, int y, std::vector<int> s) {
    independencies_.insert(canonical(CiQuery{x, y, std::move(s)}));
}

bool FactTable::contains(const CiQuery& q) const {
    return independencies_.count(canonical(q)) != 0;
}

FactTable FactTable::parse(const std::string& text,
                           const std::vector<std::string>& names) {
    auto lookup = [&](std::string nm) {
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        nm.erase(nm.begin(), std::find_if(nm.begin(), nm.end(), notspace));
        nm.erase(std::find_if(nm.rbegin(), nm.rend(), notspace).base(), nm.end());
        auto it = std::find(names.begin(), names.end(), nm);
        if (it == names.end()) throw parse_error("unknown node '" + nm + "'");
        return static_cast<int>(it - names.begin());
    };
    FactTable out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto sep = line.find("_||_");
        auto bar = line.find('|', sep == std::string::npos ? 0 : sep + 4);
        if (sep == std::string::npos || bar == std::string::npos)
            throw parse_error("bad fact line '" + line + "'");
        int x = lookup(line.substr(0, sep));
        int y = lookup(line.substr(sep + 4, bar - sep - 4));
        std::vector<int> s;
        std::istringstream cond(line.substr(bar + 1));
        std::string cell;
        while (std::getline(cond, cell, ','))
            if (cell.find_first_not_of(" \t\r") != std::string::npos)
                s.push_back(lookup(cell));
        out.add(x, y, std::move(s));
    }
    return out;
}

CiDecision table_answer(const FactTable& t, const CiQuery& q) {
    if (q.x == q.y) throw std::invalid_argument("x and y must differ");
    for (int v : q.s)
        if (v == q.x || v == q.y)
            throw std::invalid_argument("conditioning set contains an endpoint");
    return CiDecision{t.contains(q), std::nullopt, std::nullopt};
}

}  // namespace causal
