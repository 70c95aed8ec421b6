#ifndef QAMOD_REPORT_IO_HPP
#define QAMOD_REPORT_IO_HPP

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace qamod {

/// Report floats are fixed at 12 significant digits so repeated runs diff
/// byte-identically.
inline std::string fmt_g(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Same formatting without the JSON string quoting (CSV cells).
inline std::string fmt_cell(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Minimal order-preserving JSON emitter.
class JsonWriter {
public:
    void begin_object() { open_('{'); }
    void end_object() { close_('}'); }
    void begin_array() { open_('['); }
    void end_array() { close_(']'); }

    void key(const std::string& k) {
        comma_();
        s_ += '"';
        escape_(k);
        s_ += "\":";
        pending_value_ = true;
    }

    void value(double v) { put_(fmt_g(v)); }
    void value(int v) { put_(std::to_string(v)); }
    void value(size_t v) { put_(std::to_string(v)); }
    void value(bool v) { put_(v ? "true" : "false"); }
    void value(const std::string& v) {
        comma_();
        s_ += '"';
        escape_(v);
        s_ += '"';
    }
    void value(const char* v) { value(std::string(v)); }

    void kv(const std::string& k, double v) { key(k); value(v); }
    void kv(const std::string& k, int v) { key(k); value(v); }
    void kv(const std::string& k, size_t v) { key(k); value(v); }
    void kv(const std::string& k, bool v) { key(k); value(v); }
    void kv(const std::string& k, const std::string& v) { key(k); value(v); }
    void kv(const std::string& k, const char* v) { key(k); value(v); }

    void kv(const std::string& k, const std::vector<double>& vs) {
        key(k);
        begin_array();
        for (double v : vs) value(v);
        end_array();
    }

    const std::string& str() const { return s_; }

private:
    void open_(char c) {
        comma_();
        s_ += c;
        first_ = true;
    }
    void close_(char c) {
        s_ += c;
        first_ = false;
        pending_value_ = false;
    }
    void comma_() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!first_) s_ += ',';
        first_ = false;
    }
    void put_(const std::string& v) {
        comma_();
        s_ += v;
    }
    void escape_(const std::string& v) {
        for (char c : v) {
            if (c == '"' || c == '\\') {
                s_ += '\\';
                s_ += c;
            } else if (c == '\n') {
                s_ += "\\n";
            } else {
                s_ += c;
            }
        }
    }

    std::string s_;
    bool first_ = true;
    bool pending_value_ = false;
};

} // namespace qamod

#endif
