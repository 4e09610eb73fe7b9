#include "wgt/gridio.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wgt {

namespace {

constexpr char kMagic[8] = {'W', 'G', 'T', 'G', 'R', 'I', 'D', '1'};

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("grid blob: truncated file");
    return v;
}

}  // namespace

void write_grid_blob(const std::string& path, const GridBlob& blob) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out.write(kMagic, 8);
    put<std::uint32_t>(out, 1);
    put<std::uint32_t>(out, blob.dtype);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(blob.dims.size()));
    put<std::uint32_t>(out, 0);
    for (const auto d : blob.dims) put<std::uint64_t>(out, d);
    for (const auto s : blob.spacing) put<double>(out, s);
    for (const auto o : blob.origin) put<double>(out, o);
    put<std::uint64_t>(out, blob.config_hash);
    out.write(reinterpret_cast<const char*>(blob.payload.data()),
              static_cast<std::streamsize>(blob.payload.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + path);
}

GridBlob read_grid_blob(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("not a grid blob: " + path);
    const auto version = get<std::uint32_t>(in);
    if (version != 1) throw std::runtime_error("unsupported grid blob version");
    GridBlob blob;
    blob.dtype = get<std::uint32_t>(in);
    const auto rank = get<std::uint32_t>(in);
    get<std::uint32_t>(in);
    blob.dims.resize(rank);
    blob.spacing.resize(rank);
    blob.origin.resize(rank);
    for (auto& d : blob.dims) d = get<std::uint64_t>(in);
    for (auto& s : blob.spacing) s = get<double>(in);
    for (auto& o : blob.origin) o = get<double>(in);
    blob.config_hash = get<std::uint64_t>(in);
    std::size_t count = blob.dtype == 1 ? 2 : 1;
    for (const auto d : blob.dims) count *= d;
    blob.payload.resize(count);
    in.read(reinterpret_cast<char*>(blob.payload.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw std::runtime_error("grid blob: truncated payload");
    return blob;
}

GridBlob to_blob(const Image2D& img, std::uint64_t config_hash) {
    GridBlob b;
    b.dtype = 0;
    b.dims = {static_cast<std::uint64_t>(img.n0()), static_cast<std::uint64_t>(img.n1())};
    b.spacing = {img.h, img.h};
    b.origin = {img.origin.x, img.origin.y};
    b.config_hash = config_hash;
    b.payload = img.data.storage();
    return b;
}

Image2D image_from_blob(const GridBlob& blob) {
    if (blob.dims.size() != 2 || blob.dtype != 0)
        throw std::runtime_error("blob is not a real 2D image");
    Image2D img(static_cast<int>(blob.dims[0]), static_cast<int>(blob.dims[1]), blob.spacing[0],
                {blob.origin[0], blob.origin[1]});
    img.data.storage() = blob.payload;
    return img;
}

GridBlob to_blob(const LateralField& f, std::uint64_t config_hash) {
    GridBlob b;
    b.dtype = 1;
    b.dims = {static_cast<std::uint64_t>(f.nt), static_cast<std::uint64_t>(f.nb),
              static_cast<std::uint64_t>(f.nz)};
    b.spacing = {f.dt, 1.0, f.hz};
    b.origin = {0.0, 0.0, f.z0};
    b.config_hash = config_hash;
    b.payload.resize(2 * f.re.size());
    for (std::size_t i = 0; i < f.re.size(); ++i) {
        b.payload[2 * i] = f.re[i];
        b.payload[2 * i + 1] = f.im[i];
    }
    return b;
}

void write_sinogram_csv(const std::string& path, const SliceSinogram& s,
                        std::uint64_t config_hash) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out.precision(17);
    out << "# wgt sinogram y3 " << s.y3 << " config " << config_hash << "\n";
    out << "angle\\offset";
    for (const double o : s.offsets) out << "," << o;
    out << "\n";
    for (std::size_t a = 0; a < s.angles.size(); ++a) {
        out << s.angles[a];
        for (std::size_t j = 0; j < s.offsets.size(); ++j) out << "," << s.data(a, j);
        out << "\n";
    }
}

SliceSinogram read_sinogram_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    SliceSinogram s;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# wgt sinogram", 0) != 0)
        throw std::runtime_error("not a sinogram csv: " + path);
    {
        std::istringstream ls(line);
        std::string tok;
        ls >> tok >> tok >> tok >> s.y3;
    }
    if (!std::getline(in, line)) throw std::runtime_error("sinogram csv: missing header");
    {
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');  // corner label
        while (std::getline(ls, cell, ',')) s.offsets.push_back(std::stod(cell));
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');
        s.angles.push_back(std::stod(cell));
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != s.offsets.size())
            throw std::runtime_error("sinogram csv: ragged row");
        rows.push_back(std::move(row));
    }
    s.data = Array2D<double>(s.angles.size(), s.offsets.size());
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t j = 0; j < s.offsets.size(); ++j) s.data(a, j) = rows[a][j];
    return s;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace wgt
