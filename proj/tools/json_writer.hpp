#pragma once

// Insertion-ordered JSON emitter with fixed float formatting (15 significant
// digits), so identical invocations serialize to identical bytes.  The
// vendored json library normalizes floats to shortest round-trip form and
// reorders object keys, which breaks both output requirements; parsing on
// the test side still uses the vendored library.

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace cli {

inline std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

class JsonValue {
  public:
    static JsonValue object() { return JsonValue(Kind::object); }
    static JsonValue array() { return JsonValue(Kind::array); }
    static JsonValue null() { return JsonValue(Kind::null); }
    static JsonValue boolean(bool b) {
        JsonValue v(Kind::literal);
        v.text_ = b ? "true" : "false";
        return v;
    }
    static JsonValue number(double x) {
        if (!std::isfinite(x)) return null();  // JSON has no inf/nan
        JsonValue v(Kind::literal);
        v.text_ = format_double(x);
        return v;
    }
    static JsonValue integer(long long n) {
        JsonValue v(Kind::literal);
        v.text_ = std::to_string(n);
        return v;
    }
    static JsonValue string(const std::string& s) {
        JsonValue v(Kind::string);
        v.text_ = s;
        return v;
    }

    JsonValue& set(const std::string& key, JsonValue v) {
        fields_.emplace_back(key, std::move(v));
        return *this;
    }
    JsonValue& push(JsonValue v) {
        fields_.emplace_back(std::string(), std::move(v));
        return *this;
    }
    // append all fields of another object, keeping their order
    JsonValue& merge_from(JsonValue other) {
        for (auto& f : other.fields_) fields_.push_back(std::move(f));
        return *this;
    }

    std::string dump(int indent = 0) const {
        std::string out;
        write(out, indent);
        return out;
    }

  private:
    enum class Kind { object, array, string, literal, null };

    explicit JsonValue(Kind k) : kind_(k) {}

    static void escape(std::string& out, const std::string& s) {
        out += '"';
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out += buf;
                    } else {
                        out += c;
                    }
            }
        }
        out += '"';
    }

    void write(std::string& out, int indent) const {
        switch (kind_) {
            case Kind::null: out += "null"; return;
            case Kind::literal: out += text_; return;
            case Kind::string: escape(out, text_); return;
            case Kind::object:
            case Kind::array: {
                const char open = kind_ == Kind::object ? '{' : '[';
                const char close = kind_ == Kind::object ? '}' : ']';
                if (fields_.empty()) {
                    out += open;
                    out += close;
                    return;
                }
                out += open;
                for (size_t i = 0; i < fields_.size(); ++i) {
                    out += i ? ",\n" : "\n";
                    out.append(static_cast<size_t>(indent) + 2, ' ');
                    if (kind_ == Kind::object) {
                        escape(out, fields_[i].first);
                        out += ": ";
                    }
                    fields_[i].second.write(out, indent + 2);
                }
                out += '\n';
                out.append(static_cast<size_t>(indent), ' ');
                out += close;
                return;
            }
        }
    }

    Kind kind_;
    std::string text_;
    std::vector<std::pair<std::string, JsonValue>> fields_;
};

// Ordered key/value echo of the resolved run configuration, rendered either
// as a JSON object or as "# key=value" CSV header comments.
class ConfigEcho {
  public:
    void add(const std::string& key, double v) {
        items_.push_back({key, JsonValue::number(v), format_double(v)});
    }
    void add(const std::string& key, long long v) {
        items_.push_back({key, JsonValue::integer(v), std::to_string(v)});
    }
    void add(const std::string& key, const std::string& v) {
        items_.push_back({key, JsonValue::string(v), v});
    }

    JsonValue json() const {
        JsonValue obj = JsonValue::object();
        for (const Item& it : items_) obj.set(it.key, it.value);
        return obj;
    }

    std::string csv() const {
        std::string out;
        for (const Item& it : items_) out += "# " + it.key + "=" + it.text + "\n";
        return out;
    }

  private:
    struct Item {
        std::string key;
        JsonValue value;
        std::string text;
    };

    std::vector<Item> items_;
};

}  // namespace cli
