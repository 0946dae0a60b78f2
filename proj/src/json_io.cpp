#include "ucl/json_io.hpp"

#include <cstdio>
#include <stdexcept>

namespace ucl {

namespace {

std::vector<std::vector<double>> real_part(const Matrix& m) {
    std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).real();
    return out;
}

std::vector<std::vector<double>> imag_part(const Matrix& m) {
    std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).imag();
    return out;
}

int checked_dim(const Json& j, const char* what) {
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw std::invalid_argument(std::string(what) + ": missing integer field 'dim'");
    int dim = j["dim"].get<int>();
    if (dim < 1) throw std::invalid_argument(std::string(what) + ": 'dim' must be >= 1");
    return dim;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Json to_json(const Matrix& m) {
    return Json{{"dim", m.rows()}, {"re", real_part(m)}, {"im", imag_part(m)}};
}

Matrix matrix_from_json(const Json& j) {
    const int dim = checked_dim(j, "matrix");
    if (!j.contains("re") || !j.contains("im"))
        throw std::invalid_argument("matrix: missing 're' or 'im' field");
    const auto& re = j["re"];
    const auto& im = j["im"];
    if (!re.is_array() || !im.is_array() || static_cast<int>(re.size()) != dim ||
        static_cast<int>(im.size()) != dim)
        throw std::invalid_argument("matrix: 're'/'im' must be dim x dim arrays");
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        if (static_cast<int>(re[i].size()) != dim || static_cast<int>(im[i].size()) != dim)
            throw std::invalid_argument("matrix: row " + std::to_string(i) +
                                        " has the wrong length");
        for (int jj = 0; jj < dim; ++jj)
            m(i, jj) = Complex(re[i][jj].get<double>(), im[i][jj].get<double>());
    }
    return m;
}

Json to_json(const PureState& s) {
    std::vector<double> re(s.dim()), im(s.dim());
    for (int i = 0; i < s.dim(); ++i) {
        re[i] = s.amplitudes()[i].real();
        im[i] = s.amplitudes()[i].imag();
    }
    return Json{{"dim", s.dim()}, {"re", re}, {"im", im}};
}

PureState state_from_json(const Json& j) {
    const int dim = checked_dim(j, "state");
    if (!j.contains("re") || !j.contains("im"))
        throw std::invalid_argument("state: missing 're' or 'im' field");
    const auto& re = j["re"];
    const auto& im = j["im"];
    if (!re.is_array() || !im.is_array() || static_cast<int>(re.size()) != dim ||
        static_cast<int>(im.size()) != dim)
        throw std::invalid_argument("state: 're'/'im' must have length dim");
    Vector v(dim);
    for (int i = 0; i < dim; ++i)
        v[i] = Complex(re[i].get<double>(), im[i].get<double>());
    return PureState(std::move(v));
}

Json to_json(const ChoiState& a) {
    return Json{{"d", a.d}, {"M", a.M}, {"matrix", to_json(a.matrix)}};
}

ChoiState choi_from_json(const Json& j) {
    ChoiState a;
    a.d = j.at("d").get<int>();
    a.M = j.at("M").get<int>();
    a.matrix = matrix_from_json(j.at("matrix"));
    a.validate();
    return a;
}

Json to_json(const FilterChannel& ch) {
    Json attached = Json::array();
    for (const PureState& s : ch.attached) attached.push_back(to_json(s));
    return Json{{"d", ch.d},
                {"M", ch.M},
                {"k", ch.k},
                {"filter", to_json(ch.filter)},
                {"attached", attached}};
}

FilterChannel filter_from_json(const Json& j) {
    FilterChannel ch;
    ch.d = j.at("d").get<int>();
    ch.M = j.at("M").get<int>();
    ch.k = j.at("k").get<int>();
    ch.filter = matrix_from_json(j.at("filter"));
    for (const Json& s : j.at("attached")) ch.attached.push_back(state_from_json(s));
    ch.validate();
    return ch;
}

Json to_json(const Channel& ch) {
    if (std::holds_alternative<FilterChannel>(ch))
        return to_json(std::get<FilterChannel>(ch));
    return to_json(std::get<ChoiState>(ch));
}

Channel channel_from_json(const Json& j) {
    if (j.contains("filter")) return filter_from_json(j);
    if (j.contains("matrix")) return choi_from_json(j);
    throw std::invalid_argument(
        "channel: expected a 'filter' (procedure) or 'matrix' (Choi state) field");
}

Json to_json(const FidelityReport& r) {
    return Json{{"per_output", r.per_output},
                {"mean", r.mean},
                {"mean_success_probability", r.mean_success_probability},
                {"stderr", r.mc_standard_errors}};
}

Json to_json(const OptimaReport& r) {
    Json j{{"case", to_string(r.scenario)}, {"d", r.d},         {"M", r.M},
           {"f_bar", r.f_bar},              {"f_k", r.f_k},     {"f_other", r.f_other}};
    j["D"] = r.discriminant ? Json(*r.discriminant) : Json(nullptr);
    j["lambda"] = r.lambda_max ? Json(*r.lambda_max) : Json(nullptr);
    j["xi"] = r.xi ? Json(*r.xi) : Json(nullptr);
    j["gamma"] = r.gamma ? Json(*r.gamma) : Json(nullptr);
    return j;
}

Json to_json(const ProductVerdict& v) {
    return Json{{"is_product", v.is_product},
                {"schmidt_numbers", v.schmidt_numbers},
                {"worst_residual", v.worst_residual}};
}

Json to_json(const SearchConfig& c) {
    return Json{{"d", c.d},
                {"M", c.M},
                {"case", to_string(c.scenario)},
                {"restarts", c.restarts},
                {"max_iterations", c.max_iterations},
                {"convergence_tolerance", c.convergence_tolerance},
                {"penalty_weight", c.penalty_weight},
                {"seed", c.seed}};
}

Json to_json(const SearchResult& r) {
    return Json{{"best_objective", r.best_objective},
                {"best_f_bar", r.best_f_bar},
                {"gap_to_closed_form", r.gap_to_closed_form},
                {"constraint_violation", r.constraint_violation},
                {"iterations_used", r.iterations_used}};
}

std::string table_to_csv(const std::vector<OptimaReport>& rows) {
    static const char* kHeader[] = {"case", "d",  "M",     "D",   "lambda",
                                    "xi",   "gamma", "f_bar", "f_k", "f_other"};
    constexpr int kCols = 10;

    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size() + 1);
    cells.emplace_back(kHeader, kHeader + kCols);
    for (const OptimaReport& r : rows) {
        std::vector<std::string> row(kCols);
        row[0] = to_string(r.scenario);
        row[1] = std::to_string(r.d);
        row[2] = std::to_string(r.M);
        row[3] = r.discriminant ? format_double(*r.discriminant) : "";
        row[4] = r.lambda_max ? format_double(*r.lambda_max) : "";
        row[5] = r.xi ? format_double(*r.xi) : "";
        row[6] = r.gamma ? format_double(*r.gamma) : "";
        row[7] = format_double(r.f_bar);
        row[8] = format_double(r.f_k);
        row[9] = format_double(r.f_other);
        cells.push_back(std::move(row));
    }

    std::size_t width[kCols] = {};
    for (const auto& row : cells)
        for (int c = 0; c < kCols; ++c) width[c] = std::max(width[c], row[c].size());

    std::string out;
    for (const auto& row : cells) {
        for (int c = 0; c < kCols; ++c) {
            std::string cell = row[c];
            cell.resize(width[c], ' ');
            out += cell;
            if (c + 1 < kCols) out += ",";
        }
        out += "\n";
    }
    return out;
}

}  // namespace ucl
