#include "mppsoc/vhdl_rewriter.hpp"

#include <algorithm>
#include <cctype>

namespace mppsoc::vhdl {

namespace {

bool is_delim(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

struct Token {
    std::string_view text;
    std::size_t offset;
};

std::vector<Token> locate_tokens(std::string_view line)
{
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_delim(line[i]))
            ++i;
        const std::size_t start = i;
        while (i < line.size() && !is_delim(line[i]))
            ++i;
        if (i > start)
            tokens.push_back({line.substr(start, i - start), start});
    }
    return tokens;
}

bool iequals(std::string_view a, std::string_view b)
{
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

bool is_literal_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

// A value token is `(`* literal suffix, where the literal is a quoted string
// or a run of identifier/number characters. Only the literal is replaced.
struct ValueParts {
    std::size_t begin;
    std::size_t end;
};

ValueParts split_value(std::string_view token)
{
    std::size_t b = 0;
    while (b < token.size() && token[b] == '(')
        ++b;
    std::size_t e = b;
    if (e < token.size() && token[e] == '"') {
        const auto close = token.find('"', e + 1);
        e = close == std::string_view::npos ? token.size() : close + 1;
    } else {
        while (e < token.size() && is_literal_char(token[e]))
            ++e;
    }
    return {b, e};
}

void check_action(const RewriteAction& action)
{
    const auto bad = [&](const std::string& why) {
        throw RewriteError(RewriteError::Kind::BadAction,
                           "bad rewrite action for anchor '" + action.anchor + "': " + why);
    };
    const auto single_token = [](const std::string& s) {
        const auto t = tokenize_line(s);
        return t.size() == 1 && t.front() == s;
    };
    if (!single_token(action.anchor))
        bad("anchor must be a single token");
    if (action.target_name && !single_token(*action.target_name))
        bad("target name must be a single token");
    if (action.new_value.empty())
        bad("new value is empty");
    const auto parts = split_value(action.new_value);
    if (parts.begin != 0 || parts.end != action.new_value.size())
        bad("new value '" + action.new_value + "' is not a single literal");
}

struct Match {
    std::size_t value_offset;  // into the line
    ValueParts parts;          // relative to the value token
    std::string_view value_token;
};

// nullopt when the line is not selected by the action.
std::optional<Match> match_line(std::string_view line, const RewriteAction& action)
{
    const auto tokens = locate_tokens(line);
    if (tokens.empty() || tokens[0].text != action.anchor)
        return std::nullopt;
    std::size_t search_from = 1;
    if (action.target_name) {
        if (tokens.size() < 2 || !iequals(tokens[1].text, *action.target_name))
            return std::nullopt;
        search_from = 2;
    }
    const std::string_view delim = to_string(action.delimiter);
    for (std::size_t i = search_from; i < tokens.size(); ++i) {
        if (!iequals(tokens[i].text, delim))
            continue;
        if (i + 1 == tokens.size())
            break;
        const Token& value = tokens[i + 1];
        return Match{value.offset, split_value(value.text), value.text};
    }
    throw RewriteError(RewriteError::Kind::DelimiterNotFound,
                       "line selected by anchor '" + action.anchor + "' has no value after '" +
                           std::string(delim) + "': " + std::string(line));
}

} // namespace

std::string_view to_string(Delimiter d)
{
    switch (d) {
    case Delimiter::Assign: return ":=";
    case Delimiter::Arrow: return "=>";
    case Delimiter::VectorType: return "STD_LOGIC_VECTOR";
    }
    return "?";
}

TemplateFile TemplateFile::from_text(std::string name, std::string_view text)
{
    TemplateFile f;
    f.name = std::move(name);
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        f.lines.emplace_back(line);
        if (eol == std::string_view::npos)
            break;
        text.remove_prefix(eol + 1);
    }
    return f;
}

std::string TemplateFile::text() const
{
    std::string out;
    for (const auto& line : lines) {
        out += line;
        out += '\n';
    }
    return out;
}

std::vector<std::string> tokenize_line(std::string_view line)
{
    std::vector<std::string> out;
    for (const auto& t : locate_tokens(line))
        out.emplace_back(t.text);
    return out;
}

LineRewrite rewrite_line(std::string_view line, const RewriteAction& action)
{
    check_action(action);
    const auto match = match_line(line, action);
    if (!match)
        return {std::string(line), false};
    std::string out;
    out.reserve(line.size() + action.new_value.size());
    out.append(line.substr(0, match->value_offset + match->parts.begin));
    out.append(action.new_value);
    out.append(line.substr(match->value_offset + match->parts.end));
    return {std::move(out), true};
}

std::optional<std::string> extract_value(std::string_view line, const RewriteAction& action)
{
    const auto match = match_line(line, action);
    if (!match)
        return std::nullopt;
    return std::string(
        match->value_token.substr(match->parts.begin, match->parts.end - match->parts.begin));
}

FileRewrite apply_to_file(const TemplateFile& file, std::span<const RewriteAction> actions)
{
    for (const auto& a : actions)
        check_action(a);

    FileRewrite result;
    result.file.name = file.name;
    result.file.lines.reserve(file.lines.size());
    result.applied_counts.assign(actions.size(), 0);

    for (const auto& original : file.lines) {
        std::string line = original;
        bool touched = false;
        for (std::size_t i = 0; i < actions.size(); ++i) {
            auto r = rewrite_line(line, actions[i]);
            if (r.applied) {
                line = std::move(r.line);
                ++result.applied_counts[i];
                touched = true;
            }
        }
        result.lines_rewritten += touched ? 1 : 0;
        result.file.lines.push_back(std::move(line));
    }

    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (result.applied_counts[i] == 0) {
            const auto& a = actions[i];
            throw RewriteError(RewriteError::Kind::AnchorNeverMatched,
                               file.name + ": no line matches anchor '" + a.anchor + "'" +
                                   (a.target_name ? " name '" + *a.target_name + "'" : ""));
        }
    }
    return result;
}

} // namespace mppsoc::vhdl
