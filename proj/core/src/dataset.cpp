#include "altsssom/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "altsssom/errors.hpp"

namespace altsssom {

void FeatureMatrix::append_row(std::span<const double> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    require(values.size() == cols_, "row width does not match the matrix");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

std::size_t Dataset::visible_count() const {
    return static_cast<std::size_t>(std::count(visible.begin(), visible.end(), true));
}

void Dataset::check() const {
    require(labels.size() == size() && visible.size() == size(), "dataset fields disagree in length");
    for (std::size_t i = 0; i < size(); ++i) {
        if (visible[i]) require(labels[i].has_value(), "visible row has no label");
        if (labels[i]) {
            require(*labels[i] >= 0 && static_cast<std::size_t>(*labels[i]) < class_names.size(),
                    "label outside the class dictionary");
        }
    }
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string_view unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

std::optional<double> parse_number(std::string_view cell) {
    cell = trim(cell);
    if (cell.empty()) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || end != cell.data() + cell.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::vector<std::string_view> split_cells(std::string_view line, char sep = ',') {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    bool quoted = false;
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == quote) quoted = false;
        } else if (ch == '\'' || ch == '"') {
            quoted = true;
            quote = ch;
        } else if (ch == sep) {
            cells.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    cells.push_back(line.substr(start));
    return cells;
}

struct Line {
    std::size_t number;
    std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    while (!text.empty()) {
        ++number;
        const std::size_t nl = text.find('\n');
        std::string_view raw = text.substr(0, nl);
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        lines.push_back({number, raw});
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return lines;
}

bool iequals_prefix(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i]))) {
            return false;
        }
    }
    return true;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Splits "@attribute name type" into (name, type); the name may be quoted.
std::pair<std::string_view, std::string_view> split_attribute(std::string_view rest, std::size_t line) {
    rest = trim(rest);
    if (rest.empty()) throw ParseError("attribute declaration without a name", line);
    std::size_t name_end = 0;
    if (rest.front() == '\'' || rest.front() == '"') {
        name_end = rest.find(rest.front(), 1);
        if (name_end == std::string_view::npos) throw ParseError("unterminated attribute name", line);
        ++name_end;
    } else {
        while (name_end < rest.size() && !std::isspace(static_cast<unsigned char>(rest[name_end]))) ++name_end;
    }
    const std::string_view type = trim(rest.substr(name_end));
    if (type.empty()) throw ParseError("attribute declaration without a type", line);
    return {unquote(rest.substr(0, name_end)), type};
}

struct Attribute {
    std::string name;
    bool nominal = false;
    std::vector<std::string> values;
    std::size_t line = 0;
};

}  // namespace

Dataset parse_arff(std::string_view text) {
    std::vector<Attribute> attributes;
    bool in_data = false;
    Dataset data;
    std::map<std::string, ClassId, std::less<>> class_index;
    std::size_t last_line = 0;

    for (const Line& line : split_lines(text)) {
        last_line = line.number;
        const std::string_view s = trim(line.text);
        if (s.empty() || s.front() == '%') continue;

        if (!in_data) {
            if (iequals_prefix(s, "@relation")) continue;
            if (iequals_prefix(s, "@attribute")) {
                auto [name, type] = split_attribute(s.substr(10), line.number);
                Attribute attr{std::string(name), false, {}, line.number};
                if (type.front() == '{') {
                    if (type.back() != '}') throw ParseError("unterminated nominal value list", line.number);
                    attr.nominal = true;
                    for (std::string_view v : split_cells(type.substr(1, type.size() - 2))) {
                        attr.values.emplace_back(unquote(v));
                    }
                } else {
                    const std::string t = lower(type);
                    if (t != "numeric" && t != "real" && t != "integer") {
                        throw ParseError("unsupported attribute type '" + std::string(type) + "'", line.number);
                    }
                }
                attributes.push_back(std::move(attr));
                continue;
            }
            if (iequals_prefix(s, "@data")) {
                if (attributes.size() < 2) {
                    throw ParseError("need at least one numeric attribute and a class attribute", line.number);
                }
                for (std::size_t i = 0; i + 1 < attributes.size(); ++i) {
                    if (attributes[i].nominal) {
                        throw ParseError("feature attribute '" + attributes[i].name + "' is not numeric",
                                         attributes[i].line);
                    }
                }
                if (!attributes.back().nominal) {
                    throw ParseError("last attribute must be the nominal class", attributes.back().line);
                }
                data.class_names = attributes.back().values;
                for (std::size_t i = 0; i < data.class_names.size(); ++i) {
                    class_index.emplace(data.class_names[i], static_cast<ClassId>(i));
                }
                in_data = true;
                continue;
            }
            throw ParseError("unexpected header line '" + std::string(s) + "'", line.number);
        }

        if (s.front() == '{') throw ParseError("sparse rows are not supported", line.number);
        const auto cells = split_cells(s);
        if (cells.size() != attributes.size()) {
            throw ParseError("expected " + std::to_string(attributes.size()) + " cells, found " +
                                 std::to_string(cells.size()),
                             line.number);
        }
        std::vector<double> row(cells.size() - 1);
        for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
            const auto v = parse_number(cells[i]);
            if (!v) {
                throw ParseError("non-numeric value '" + std::string(trim(cells[i])) + "' for attribute '" +
                                     attributes[i].name + "'",
                                 line.number);
            }
            row[i] = *v;
        }
        const std::string_view cls = unquote(cells.back());
        std::optional<ClassId> label;
        if (cls != "?") {
            auto it = class_index.find(cls);
            if (it == class_index.end()) {
                throw ParseError("unknown class value '" + std::string(cls) + "'", line.number);
            }
            label = it->second;
        }
        data.features.append_row(row);
        data.labels.push_back(label);
        data.visible.push_back(label.has_value());
    }

    if (!in_data) throw ParseError("missing @data section", last_line);
    if (data.size() == 0) {
        data.features = FeatureMatrix(0, attributes.size() - 1);
    }
    return data;
}

Dataset parse_csv(std::string_view text, std::optional<std::size_t> label_column) {
    std::vector<std::pair<std::size_t, std::vector<std::string_view>>> rows;
    for (const Line& line : split_lines(text)) {
        if (trim(line.text).empty()) continue;
        rows.emplace_back(line.number, split_cells(line.text));
    }
    Dataset data;
    if (rows.empty()) return data;

    const std::size_t width = rows.front().second.size();
    require(width >= 2, "delimited data needs at least one feature column and a label column");
    const std::size_t label_col = label_column.value_or(width - 1);
    if (label_col >= width) {
        detail::contract_failure("label column " + std::to_string(label_col) + " is outside the " +
                                 std::to_string(width) + " columns");
    }

    auto is_feature_col = [&](std::size_t c) { return c != label_col; };
    std::size_t first = 0;
    {
        const auto& head = rows.front().second;
        for (std::size_t c = 0; c < width; ++c) {
            if (is_feature_col(c) && !parse_number(head[c])) {
                first = 1;
                break;
            }
        }
    }

    std::map<std::string, ClassId, std::less<>> class_index;
    data.features = FeatureMatrix(0, width - 1);
    std::vector<double> values(width - 1);
    for (std::size_t r = first; r < rows.size(); ++r) {
        const auto& [number, cells] = rows[r];
        if (cells.size() != width) {
            throw ParseError("row has " + std::to_string(cells.size()) + " cells, expected " +
                                 std::to_string(width),
                             number);
        }
        std::size_t k = 0;
        for (std::size_t c = 0; c < width; ++c) {
            if (!is_feature_col(c)) continue;
            const auto v = parse_number(cells[c]);
            if (!v) {
                throw ParseError("non-numeric feature value '" + std::string(trim(cells[c])) + "' in column " +
                                     std::to_string(c),
                                 number);
            }
            values[k++] = *v;
        }
        const std::string_view cls = unquote(cells[label_col]);
        std::optional<ClassId> label;
        if (!cls.empty()) {
            auto it = class_index.find(cls);
            if (it == class_index.end()) {
                it = class_index.emplace(std::string(cls), static_cast<ClassId>(data.class_names.size())).first;
                data.class_names.emplace_back(cls);
            }
            label = it->second;
        }
        data.features.append_row(values);
        data.labels.push_back(label);
        data.visible.push_back(label.has_value());
    }
    return data;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
    return buffer.str();
}

Dataset load_dataset(const std::filesystem::path& path, std::optional<std::size_t> label_column) {
    const std::string text = read_text_file(path);
    if (lower(path.extension().string()) == ".arff") return parse_arff(text);
    return parse_csv(text, label_column);
}

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

std::string to_csv(const Dataset& data) {
    std::string out;
    for (std::size_t c = 0; c < data.dim(); ++c) out += "f" + std::to_string(c + 1) + ",";
    out += "class\n";
    for (std::size_t r = 0; r < data.size(); ++r) {
        for (double v : data.features.row(r)) {
            append_double(out, v);
            out += ',';
        }
        if (data.labels[r]) out += data.class_names[static_cast<std::size_t>(*data.labels[r])];
        out += '\n';
    }
    return out;
}

std::string to_arff(const Dataset& data, std::string_view relation) {
    std::string out = "@relation " + std::string(relation) + "\n\n";
    for (std::size_t c = 0; c < data.dim(); ++c) out += "@attribute f" + std::to_string(c + 1) + " numeric\n";
    out += "@attribute class {";
    for (std::size_t i = 0; i < data.class_names.size(); ++i) {
        if (i) out += ',';
        out += data.class_names[i];
    }
    out += "}\n\n@data\n";
    for (std::size_t r = 0; r < data.size(); ++r) {
        for (double v : data.features.row(r)) {
            append_double(out, v);
            out += ',';
        }
        out += data.labels[r] ? data.class_names[static_cast<std::size_t>(*data.labels[r])] : "?";
        out += '\n';
    }
    return out;
}

Dataset rescale_minmax(Dataset data) {
    require(data.size() >= 1, "cannot rescale an empty dataset");
    for (std::size_t c = 0; c < data.dim(); ++c) {
        double lo = data.features(0, c);
        double hi = lo;
        for (std::size_t r = 1; r < data.size(); ++r) {
            lo = std::min(lo, data.features(r, c));
            hi = std::max(hi, data.features(r, c));
        }
        const double range = hi - lo;
        for (std::size_t r = 0; r < data.size(); ++r) {
            double& v = data.features(r, c);
            v = range > 0.0 ? std::clamp((v - lo) / range, 0.0, 1.0) : 0.0;
        }
    }
    return data;
}

namespace {

// Rows grouped by label, groups in ascending label order; unlabeled rows form a last group.
std::vector<std::vector<std::size_t>> rows_by_class(const Dataset& data) {
    std::map<ClassId, std::vector<std::size_t>> groups;
    std::vector<std::size_t> unlabeled;
    for (std::size_t r = 0; r < data.size(); ++r) {
        if (data.labels[r]) {
            groups[*data.labels[r]].push_back(r);
        } else {
            unlabeled.push_back(r);
        }
    }
    std::vector<std::vector<std::size_t>> out;
    for (auto& [label, rows] : groups) out.push_back(std::move(rows));
    if (!unlabeled.empty()) out.push_back(std::move(unlabeled));
    return out;
}

}  // namespace

Dataset mask_labels(Dataset data, double fraction, std::uint64_t seed) {
    require(fraction >= 0.0 && fraction <= 1.0, "supervision fraction must lie in [0, 1]");
    require(std::all_of(data.labels.begin(), data.labels.end(), [](const auto& l) { return l.has_value(); }),
            "label masking needs every label known");
    const std::size_t n = data.size();
    const auto total = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));

    auto groups = rows_by_class(data);
    std::vector<std::size_t> quota(groups.size());
    std::vector<double> remainder(groups.size());
    std::size_t assigned = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double exact = fraction * static_cast<double>(groups[g].size());
        quota[g] = static_cast<std::size_t>(std::floor(exact));
        remainder[g] = exact - static_cast<double>(quota[g]);
        assigned += quota[g];
    }
    std::vector<std::size_t> by_remainder(groups.size());
    std::iota(by_remainder.begin(), by_remainder.end(), std::size_t{0});
    std::stable_sort(by_remainder.begin(), by_remainder.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < total && i < by_remainder.size(); ++i) {
        const std::size_t g = by_remainder[i];
        if (quota[g] < groups[g].size()) {
            ++quota[g];
            ++assigned;
        }
    }

    std::mt19937_64 rng(seed);
    data.visible.assign(n, false);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        std::shuffle(groups[g].begin(), groups[g].end(), rng);
        for (std::size_t i = 0; i < quota[g]; ++i) data.visible[groups[g][i]] = true;
    }
    return data;
}

FoldPlan make_folds(const Dataset& data, std::size_t k, std::size_t repetitions, std::uint64_t seed) {
    require(k >= 2, "cross-validation needs k >= 2");
    if (k > data.size()) {
        detail::contract_failure("cannot split " + std::to_string(data.size()) + " rows into " +
                                 std::to_string(k) + " folds");
    }
    FoldPlan plan;
    plan.k = k;
    for (std::size_t r = 0; r < repetitions; ++r) {
        const std::uint64_t rep_seed = seed + r;
        std::mt19937_64 rng(rep_seed);
        std::vector<std::vector<std::size_t>> folds(k);
        std::size_t next = 0;
        for (auto& group : rows_by_class(data)) {
            std::shuffle(group.begin(), group.end(), rng);
            for (std::size_t row : group) folds[next++ % k].push_back(row);
        }
        for (auto& fold : folds) std::sort(fold.begin(), fold.end());
        plan.seeds.push_back(rep_seed);
        plan.repetitions.push_back(std::move(folds));
    }
    return plan;
}

Dataset subset(const Dataset& data, std::span<const std::size_t> rows) {
    Dataset out;
    out.class_names = data.class_names;
    out.features = FeatureMatrix(0, data.dim());
    for (std::size_t r : rows) {
        require(r < data.size(), "subset row out of range");
        out.features.append_row(data.features.row(r));
        out.labels.push_back(data.labels[r]);
        out.visible.push_back(data.visible[r]);
    }
    return out;
}

}  // namespace altsssom
