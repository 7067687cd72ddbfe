#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <system_error>
#include <vector>

#include "ftle/errors.hpp"
#include "ftle/mesh.hpp"

// File formats (ASCII, LF line endings):
//   coordinates: "<n_points> <dim>"       then n_points rows of dim reals
//   faces:       "<n_faces> <verts>"      then n_faces rows of verts indices
//   flowmap:     same layout as coordinates
//   field:       "<n_points> 1"           then one value per row
// Values are written with shortest round-trip precision, so write/read is
// an exact identity on the numeric payload.

namespace ftle {

namespace detail {

class LineReader {
public:
    LineReader(const std::string& path) : path_(path), in_(path) {
        if (!in_) throw error("cannot open " + path);
    }

    bool next() {
        if (!std::getline(in_, line_)) return false;
        ++line_no_;
        if (!line_.empty() && line_.back() == '\r') line_.pop_back();
        pos_ = 0;
        return true;
    }

    // Splits the current line on blanks; the whole token must parse.
    template <typename T>
    bool next_token(T& out) {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t'))
            ++pos_;
        if (pos_ >= line_.size()) return false;
        std::size_t end = pos_;
        while (end < line_.size() && line_[end] != ' ' && line_[end] != '\t')
            ++end;
        const char* first = line_.data() + pos_;
        const char* last = line_.data() + end;
        auto [ptr, ec] = std::from_chars(first, last, out);
        if (ec != std::errc() || ptr != last)
            fail("invalid numeric token '" + std::string(first, last) + "'");
        pos_ = end;
        return true;
    }

    bool at_line_end() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t'))
            ++pos_;
        return pos_ >= line_.size();
    }

    [[noreturn]] void fail(const std::string& reason) const {
        throw parse_error(path_, line_no_, reason);
    }

    long line_no() const { return line_no_; }

private:
    std::string path_;
    std::ifstream in_;
    std::string line_;
    std::size_t pos_ = 0;
    long line_no_ = 0;
};

template <typename T>
void read_row(LineReader& rd, T* out, int cols, const char* what) {
    for (int c = 0; c < cols; ++c)
        if (!rd.next_token(out[c]))
            rd.fail(std::string("expected ") + std::to_string(cols) + " " +
                    what + " per row, found " + std::to_string(c));
    if (!rd.at_line_end()) rd.fail("trailing tokens on row");
}

// Reads "<rows> <cols>" and the body into a flat row-major vector.
template <typename T>
void read_table(const std::string& path, std::int64_t& rows, int& cols,
                std::vector<T>& values, const char* what) {
    LineReader rd(path);
    if (!rd.next()) rd.fail("missing header");
    std::int64_t r = 0, c = 0;
    if (!rd.next_token(r) || !rd.next_token(c) || !rd.at_line_end())
        rd.fail("header must be '<rows> <cols>'");
    if (r < 0 || c < 1 || c > 4) rd.fail("header counts out of range");
    rows = r;
    cols = static_cast<int>(c);
    values.resize(static_cast<std::size_t>(rows) * cols);
    for (std::int64_t i = 0; i < rows; ++i) {
        if (!rd.next())
            throw parse_error(path, rd.line_no() + 1,
                              "truncated body: expected " + std::to_string(rows) +
                              " rows, found " + std::to_string(i));
        read_row(rd, values.data() + static_cast<std::size_t>(i) * cols, cols, what);
    }
}

inline char* format_value(char* p, char* end, real v) {
    auto res = std::to_chars(p, end, v);
    return res.ptr;
}

inline char* format_value(char* p, char* end, index_t v) {
    auto res = std::to_chars(p, end, v);
    return res.ptr;
}

// Streams "<rows> <cols>" plus the body, flushing in ~1MB chunks.
template <typename T>
void write_table(const std::string& path, std::int64_t rows, int cols,
                 const std::vector<T>& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot open " + path + " for writing");
    std::string buf;
    buf.reserve(1 << 20);
    char num[64];
    char* numend = num + sizeof(num);
    buf.append(std::to_string(rows)).append(" ").append(std::to_string(cols)).append("\n");
    for (std::int64_t i = 0; i < rows; ++i) {
        const T* row = values.data() + static_cast<std::size_t>(i) * cols;
        for (int c = 0; c < cols; ++c) {
            char* q = format_value(num, numend, row[c]);
            if (c) buf.push_back(' ');
            buf.append(num, q);
        }
        buf.push_back('\n');
        if (buf.size() > (1 << 20) - 256) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw error("write failed for " + path);
}

} // namespace detail

/// Raw contents of a coordinates-layout file.
struct CoordTable {
    index_t rows = 0;
    int cols = 0;
    std::vector<real> values;
};

inline CoordTable read_coordinates(const std::string& path) {
    CoordTable t;
    std::int64_t rows = 0;
    detail::read_table(path, rows, t.cols, t.values, "reals");
    if (rows > std::numeric_limits<index_t>::max())
        throw parse_error(path, 1, "row count too large");
    t.rows = static_cast<index_t>(rows);
    return t;
}

inline Mesh read_mesh(const std::string& coords_path, const std::string& faces_path) {
    Mesh mesh;
    CoordTable coords = read_coordinates(coords_path);
    if (coords.cols != 2 && coords.cols != 3)
        throw parse_error(coords_path, 1, "dim must be 2 or 3, got " +
                                              std::to_string(coords.cols));
    mesh.dim = coords.cols;
    mesh.n_points = coords.rows;
    mesh.coords = std::move(coords.values);

    std::int64_t n_faces = 0;
    int verts = 0;
    detail::read_table(faces_path, n_faces, verts, mesh.faces, "indices");
    if (verts != mesh.dim + 1)
        throw parse_error(faces_path, 1,
                          "verts_per_face must be dim+1 = " +
                          std::to_string(mesh.dim + 1) + ", got " + std::to_string(verts));
    if (n_faces > std::numeric_limits<index_t>::max())
        throw parse_error(faces_path, 1, "face count too large");
    mesh.n_faces = static_cast<index_t>(n_faces);
    mesh.verts_per_face = verts;

    for (std::int64_t f = 0; f < mesh.n_faces; ++f)
        for (int s = 0; s < verts; ++s) {
            index_t v = mesh.faces[static_cast<std::size_t>(f) * verts + s];
            if (v < 0 || v >= mesh.n_points)
                throw parse_error(faces_path, f + 2,
                                  "point index " + std::to_string(v) +
                                  " out of range [0," + std::to_string(mesh.n_points) + ")");
        }
    return mesh;
}

inline void write_mesh(const Mesh& mesh, const std::string& coords_path,
                       const std::string& faces_path) {
    detail::write_table(coords_path, mesh.n_points, mesh.dim, mesh.coords);
    detail::write_table(faces_path, mesh.n_faces, mesh.verts_per_face, mesh.faces);
}

/// Reads a flowmap against its mesh; the file must hold exactly one row of
/// `dim` reals per mesh point. t0/t1 are not part of the format.
inline Flowmap read_flowmap(const std::string& path, const Mesh& mesh) {
    std::int64_t rows = 0;
    int cols = 0;
    Flowmap fm;
    detail::read_table(path, rows, cols, fm.values, "reals");
    if (rows != mesh.n_points || cols != mesh.dim)
        throw parse_error(path, 1,
                          "flowmap is " + std::to_string(rows) + "x" + std::to_string(cols) +
                          " but mesh needs " + std::to_string(mesh.n_points) + "x" +
                          std::to_string(mesh.dim));
    return fm;
}

inline void write_flowmap(const Flowmap& flowmap, int dim, const std::string& path) {
    detail::write_table(path, static_cast<std::int64_t>(flowmap.values.size() / dim),
                        dim, flowmap.values);
}

/// One scalar per row with an "<n> 1" header (FTLE field output).
inline void write_scalar_table(const std::vector<real>& values, const std::string& path) {
    detail::write_table(path, static_cast<std::int64_t>(values.size()), 1, values);
}

} // namespace ftle
