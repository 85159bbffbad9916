#include "coopsig/io.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "coopsig/errors.h"
#include "json.hpp"

namespace coopsig {

namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest-ish decimal rendering shared by every CSV column; NaN (an
// undefined pct on an unfiltered record) becomes an empty field.
std::string format_number(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string action_token(const TurnAction& a) {
    switch (a.kind) {
        case TurnAction::Kind::GoTo:
            return "goto:" + std::to_string(a.item_id);
        case TurnAction::Kind::Send:
            return "send";
        case TurnAction::Kind::Quit:
            return "quit";
        case TurnAction::Kind::Pass:
            return "pass";
    }
    throw DataError("unhandled action kind");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

long long parse_ll(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw DataError("");
        return v;
    } catch (const std::exception&) {
        throw DataError(std::string("bad ") + what + ": '" + s + "'");
    }
}

uint64_t parse_u64(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        const uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw DataError("");
        return v;
    } catch (const std::exception&) {
        throw DataError(std::string("bad ") + what + ": '" + s + "'");
    }
}

double parse_number(const std::string& s, const char* what) {
    if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw DataError("");
        return v;
    } catch (const std::exception&) {
        throw DataError(std::string("bad ") + what + ": '" + s + "'");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string() + " for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw DataError("read failure on " + path.string());
    return std::move(buffer).str();
}

void atomic_write_text_file(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path parent = path.parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("write failure on " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw DataError("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

// ---------------------------------------------------------------------------
// Trial JSON
// ---------------------------------------------------------------------------

namespace {

ordered_json cell_to_json(Cell c) { return ordered_json::array({c.row, c.col}); }

Cell cell_from_json(const ordered_json& j) {
    if (!j.is_array() || j.size() != 2) throw DataError("cell must be a [row, col] pair");
    return Cell{j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

std::string trials_to_json(const std::vector<Trial>& trials) {
    ordered_json list = ordered_json::array();
    for (const Trial& trial : trials) {
        const GridSpec& grid = trial.grid();
        ordered_json j;
        j["width"] = grid.width();
        j["height"] = grid.height();
        ordered_json barrier = ordered_json::array();
        for (Cell c : grid.barrier()) barrier.push_back(cell_to_json(c));
        j["barrier"] = std::move(barrier);
        j["signaler_start"] = cell_to_json(grid.signaler_start());
        j["receiver_start"] = cell_to_json(grid.receiver_start());
        j["condition"] = barrier_condition_name(grid.condition());
        ordered_json items = ordered_json::array();
        for (const Item& item : trial.items()) {
            ordered_json ij;
            ij["id"] = item.id;
            ij["row"] = item.cell.row;
            ij["col"] = item.cell.col;
            ij["shape"] = feature_name(item.shape);
            ij["color"] = feature_name(item.color);
            items.push_back(std::move(ij));
        }
        j["items"] = std::move(items);
        j["target_id"] = trial.target_id();
        j["seed"] = trial.seed();
        list.push_back(std::move(j));
    }
    return list.dump(2) + "\n";
}

std::vector<Trial> trials_from_json(const std::string& text) {
    ordered_json list;
    try {
        list = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("trial file is not valid JSON: ") + e.what());
    }
    if (!list.is_array()) throw DataError("trial file must be a JSON array");

    std::vector<Trial> trials;
    trials.reserve(list.size());
    try {
        for (const ordered_json& j : list) {
            std::vector<Cell> barrier;
            for (const ordered_json& c : j.at("barrier")) barrier.push_back(cell_from_json(c));
            GridSpec grid(j.at("width").get<int>(), j.at("height").get<int>(), std::move(barrier),
                          cell_from_json(j.at("signaler_start")),
                          cell_from_json(j.at("receiver_start")),
                          barrier_condition_from_name(j.at("condition").get<std::string>()));
            std::vector<Item> items;
            for (const ordered_json& ij : j.at("items")) {
                items.push_back(Item{ij.at("id").get<int>(),
                                     Cell{ij.at("row").get<int>(), ij.at("col").get<int>()},
                                     feature_from_name(ij.at("shape").get<std::string>()),
                                     feature_from_name(ij.at("color").get<std::string>())});
            }
            trials.emplace_back(std::move(grid), std::move(items), j.at("target_id").get<int>(),
                                j.at("seed").get<uint64_t>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed trial entry: ") + e.what());
    }
    return trials;
}

// ---------------------------------------------------------------------------
// Records CSV
// ---------------------------------------------------------------------------

const char* const kRecordsCsvHeader =
    "trial_id,seed,n_items,barrier,model,s_level,r_level,signaler_action,signal,"
    "receiver_action,achieved_utility,cc_utility,pct_optimal,behavior,steps_total";

std::string records_to_csv(const std::vector<TrialRecord>& records) {
    std::string out = kRecordsCsvHeader;
    out.push_back('\n');
    for (const TrialRecord& rec : records) {
        out += std::to_string(rec.trial_id);
        out.push_back(',');
        out += std::to_string(rec.seed);
        out.push_back(',');
        out += std::to_string(rec.n_items);
        out.push_back(',');
        out += barrier_condition_name(rec.barrier);
        out.push_back(',');
        out += model_name(rec.model);
        out.push_back(',');
        out += std::to_string(rec.s_level);
        out.push_back(',');
        out += std::to_string(rec.r_level);
        out.push_back(',');
        out += action_token(rec.signaler_action);
        out.push_back(',');
        if (rec.signaler_action.kind == TurnAction::Kind::Send) {
            out += feature_name(rec.signaler_action.signal);
        }
        out.push_back(',');
        if (rec.receiver_action) out += action_token(*rec.receiver_action);
        out.push_back(',');
        out += format_number(rec.achieved_utility);
        out.push_back(',');
        out += format_number(rec.cc_utility);
        out.push_back(',');
        out += format_number(rec.pct_optimal);
        out.push_back(',');
        out += behavior_name(rec.behavior);
        out.push_back(',');
        out += std::to_string(rec.steps_total);
        out.push_back('\n');
    }
    return out;
}

namespace {

TurnAction action_from_tokens(const std::string& token, const std::string& signal,
                              const char* who) {
    if (token == "send") {
        if (signal.empty()) throw DataError("send row is missing its signal");
        return TurnAction::send(feature_from_name(signal));
    }
    if (token == "quit") return TurnAction::quit();
    if (token == "pass") return TurnAction::pass();
    if (token.rfind("goto:", 0) == 0) {
        return TurnAction::go_to(static_cast<int>(parse_ll(token.substr(5), "item id")));
    }
    throw DataError(std::string("bad ") + who + " action token: '" + token + "'");
}

}  // namespace

std::vector<TrialRecord> records_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("records file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kRecordsCsvHeader) {
        throw DataError("records file has an unexpected header: '" + line + "'");
    }

    std::vector<TrialRecord> records;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 15) {
            throw DataError("records line " + std::to_string(line_no) + " has " +
                            std::to_string(f.size()) + " fields, expected 15");
        }
        TrialRecord rec;
        rec.trial_id = parse_ll(f[0], "trial_id");
        rec.seed = parse_u64(f[1], "seed");
        rec.n_items = static_cast<int>(parse_ll(f[2], "n_items"));
        rec.barrier = barrier_condition_from_name(f[3]);
        rec.model = model_from_name(f[4]);
        rec.s_level = static_cast<int>(parse_ll(f[5], "s_level"));
        rec.r_level = static_cast<int>(parse_ll(f[6], "r_level"));
        rec.signaler_action = action_from_tokens(f[7], f[8], "signaler");
        if (!f[9].empty()) rec.receiver_action = action_from_tokens(f[9], "", "receiver");
        rec.achieved_utility = parse_number(f[10], "achieved_utility");
        rec.cc_utility = parse_number(f[11], "cc_utility");
        rec.pct_optimal = parse_number(f[12], "pct_optimal");
        rec.behavior = behavior_from_name(f[13]);
        rec.steps_total = static_cast<int>(parse_ll(f[14], "steps_total"));
        records.push_back(rec);
    }
    return records;
}

// ---------------------------------------------------------------------------
// Summary and barrier-comparison CSVs
// ---------------------------------------------------------------------------

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    std::string out =
        "barrier,model,s_level,r_level,n_items,n,mean_pct,ci_low,ci_high,"
        "p_success,p_unsuccess,p_does,p_quit\n";
    for (const SummaryRow& row : rows) {
        out += barrier_condition_name(row.barrier);
        out.push_back(',');
        out += model_name(row.model);
        out.push_back(',');
        out += std::to_string(row.s_level);
        out.push_back(',');
        out += std::to_string(row.r_level);
        out.push_back(',');
        out += std::to_string(row.n_items);
        out.push_back(',');
        out += std::to_string(row.n);
        out.push_back(',');
        out += format_number(row.mean_pct);
        out.push_back(',');
        out += format_number(row.ci_low);
        out.push_back(',');
        out += format_number(row.ci_high);
        out.push_back(',');
        out += format_number(row.p_success);
        out.push_back(',');
        out += format_number(row.p_unsuccess);
        out.push_back(',');
        out += format_number(row.p_does);
        out.push_back(',');
        out += format_number(row.p_quit);
        out.push_back('\n');
    }
    return out;
}

std::string rbsb_to_csv(const std::vector<RbSbTest>& tests) {
    std::string out = "model,s_level,r_level,n_rb,n_sb,mean_rb,mean_sb,p_raw,p_holm\n";
    for (const RbSbTest& t : tests) {
        out += model_name(t.model);
        out.push_back(',');
        out += std::to_string(t.s_level);
        out.push_back(',');
        out += std::to_string(t.r_level);
        out.push_back(',');
        out += std::to_string(t.n_rb);
        out.push_back(',');
        out += std::to_string(t.n_sb);
        out.push_back(',');
        out += format_number(t.mean_rb);
        out.push_back(',');
        out += format_number(t.mean_sb);
        out.push_back(',');
        out += format_number(t.p_raw);
        out.push_back(',');
        out += format_number(t.p_holm);
        out.push_back('\n');
    }
    return out;
}

// ---------------------------------------------------------------------------
// Content hashing
// ---------------------------------------------------------------------------

namespace {

inline uint32_t rotl32(uint32_t v, int bits) { return (v << bits) | (v >> (32 - bits)); }

// Plain SHA-1 (FIPS 180-1); fine here because the hash names content, it does
// not protect it.
struct Sha1 {
    uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};

    void process_block(const unsigned char* p) {
        uint32_t w[80];
        for (int i = 0; i < 16; ++i) {
            w[i] = (static_cast<uint32_t>(p[4 * i]) << 24) |
                   (static_cast<uint32_t>(p[4 * i + 1]) << 16) |
                   (static_cast<uint32_t>(p[4 * i + 2]) << 8) |
                   static_cast<uint32_t>(p[4 * i + 3]);
        }
        for (int i = 16; i < 80; ++i) {
            w[i] = rotl32(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        }
        uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            const uint32_t tmp = rotl32(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rotl32(b, 30);
            b = a;
            a = tmp;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }
};

std::string sha1_hex(const std::string& data) {
    Sha1 state;
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    const size_t n = data.size();
    size_t offset = 0;
    for (; offset + 64 <= n; offset += 64) state.process_block(bytes + offset);

    unsigned char tail[128] = {0};
    const size_t rest = n - offset;
    std::memcpy(tail, bytes + offset, rest);
    tail[rest] = 0x80;
    const size_t tail_len = rest + 1 <= 56 ? 64 : 128;
    const uint64_t bit_len = static_cast<uint64_t>(n) * 8;
    for (int i = 0; i < 8; ++i) {
        tail[tail_len - 1 - i] = static_cast<unsigned char>((bit_len >> (8 * i)) & 0xFF);
    }
    state.process_block(tail);
    if (tail_len == 128) state.process_block(tail + 64);

    std::string hex;
    hex.reserve(40);
    static const char digits[] = "0123456789abcdef";
    for (uint32_t word : state.h) {
        for (int shift = 28; shift >= 0; shift -= 4) {
            hex.push_back(digits[(word >> shift) & 0xF]);
        }
    }
    return hex;
}

}  // namespace

std::string git_blob_sha1(const std::string& content) {
    std::string message = "blob " + std::to_string(content.size());
    message.push_back('\0');
    message += content;
    return sha1_hex(message);
}

}  // namespace coopsig
