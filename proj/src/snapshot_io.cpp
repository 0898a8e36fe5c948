#include "snapshot_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace swarmkit::io {

namespace {

constexpr std::array<char, 4> kMagic{'S', 'W', 'K', 'D'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "binary dumps assume a little-endian host");

template <class T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("density dump: truncated file");
    return value;
}

std::size_t total_cells(const std::vector<pde::LabeledAxis>& axes) {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.axis.cells;
    return n;
}

}  // namespace

void write_density_csv(const pde::DensityField& field, std::ostream& out) {
    out << std::setprecision(17);
    for (const auto& a : field.axes)
        out << "# axis," << a.label << ',' << a.axis.lower << ',' << a.axis.upper << ',' << a.axis.cells << '\n';
    out << "# time," << field.time << '\n';
    for (double v : field.values) out << v << '\n';
}

pde::DensityField read_density_csv(std::istream& in) {
    std::vector<pde::LabeledAxis> axes;
    double time = 0.0;
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ss(line.substr(1));
            std::string tag;
            std::getline(ss >> std::ws, tag, ',');
            if (tag == "axis") {
                pde::LabeledAxis a;
                std::string label, lower, upper, cells;
                std::getline(ss, label, ',');
                std::getline(ss, lower, ',');
                std::getline(ss, upper, ',');
                std::getline(ss, cells, ',');
                if (label.size() != 1) throw std::runtime_error("density csv: bad axis label");
                a.label = label[0];
                a.axis = {std::stod(lower), std::stod(upper), static_cast<std::size_t>(std::stoull(cells))};
                axes.push_back(a);
            } else if (tag == "time") {
                std::string t;
                std::getline(ss, t);
                time = std::stod(t);
            }
            continue;
        }
        values.push_back(std::stod(line));
    }
    if (axes.empty()) throw std::runtime_error("density csv: no axis header");
    if (values.size() != total_cells(axes)) throw std::runtime_error("density csv: value count does not match axes");
    pde::DensityField field(std::move(axes), time);
    field.values = std::move(values);
    return field;
}

void write_density_binary(const pde::DensityField& field, std::ostream& out) {
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(field.axes.size()));
    put<double>(out, field.time);
    for (const auto& a : field.axes) {
        put<std::uint8_t>(out, static_cast<std::uint8_t>(a.label));
        const char pad[3] = {0, 0, 0};
        out.write(pad, 3);
        put<std::uint32_t>(out, static_cast<std::uint32_t>(a.axis.cells));
        put<double>(out, a.axis.lower);
        put<double>(out, a.axis.upper);
    }
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
}

pde::DensityField read_density_binary(std::istream& in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw std::runtime_error("density dump: bad magic");
    if (get<std::uint32_t>(in) != kVersion) throw std::runtime_error("density dump: unsupported version");
    const auto count = get<std::uint32_t>(in);
    const double time = get<double>(in);
    std::vector<pde::LabeledAxis> axes(count);
    for (auto& a : axes) {
        a.label = static_cast<char>(get<std::uint8_t>(in));
        char pad[3];
        in.read(pad, 3);
        a.axis.cells = get<std::uint32_t>(in);
        a.axis.lower = get<double>(in);
        a.axis.upper = get<double>(in);
    }
    pde::DensityField field(std::move(axes), time);
    in.read(reinterpret_cast<char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("density dump: truncated file");
    return field;
}

void save_density(const pde::DensityField& field, const std::filesystem::path& path) {
    const bool binary = path.extension() == ".bin";
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    if (binary)
        write_density_binary(field, out);
    else
        write_density_csv(field, out);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

pde::DensityField load_density(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::array<char, 4> head{};
    in.read(head.data(), head.size());
    in.clear();
    in.seekg(0);
    if (head == kMagic) return read_density_binary(in);
    return read_density_csv(in);
}

void write_plot_columns(const pde::DensityField& field, std::ostream& out) {
    out << std::setprecision(17);
    out << "# time " << field.time << '\n';
    for (const auto& a : field.axes)
        out << "# axis " << a.label << ' ' << a.axis.lower << ' ' << a.axis.upper << ' ' << a.axis.cells << '\n';
    out << "#";
    for (const auto& a : field.axes) out << ' ' << a.label;
    out << " value\n";

    const std::size_t rank = field.rank();
    std::vector<std::size_t> idx(rank, 0);
    for (double v : field.values) {
        for (std::size_t i = 0; i < rank; ++i) out << field.axes[i].axis.center(idx[i]) << ' ';
        out << v << '\n';
        for (std::size_t i = rank; i-- > 0;) {
            if (++idx[i] < field.extent(i)) break;
            idx[i] = 0;
        }
    }
}

void save_plot_columns(const pde::DensityField& field, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_plot_columns(field, out);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

double plot_columns_mass(std::istream& in) {
    double volume = 1.0;
    std::size_t rank = 0;
    double sum = 0.0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ss(line.substr(1));
            std::string tag;
            ss >> tag;
            if (tag == "axis") {
                char label;
                double lower, upper;
                std::size_t cells;
                ss >> label >> lower >> upper >> cells;
                volume *= (upper - lower) / static_cast<double>(cells);
                ++rank;
            }
            continue;
        }
        std::istringstream ss(line);
        double value = 0.0;
        for (std::size_t i = 0; i <= rank; ++i) ss >> value;
        sum += value;
    }
    return sum * volume;
}

}  // namespace swarmkit::io
