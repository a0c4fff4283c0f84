#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace webvec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments: out-of-range parameters, violated preconditions.
class UsageError : public Error {
public:
    using Error::Error;
};

/// A text file did not follow its grammar. `line()` is 1-based.
class FormatError : public Error {
public:
    FormatError(std::string path, std::size_t line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what),
          path_(std::move(path)), line_(line) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// A word could not be resolved to a vector.
class UnknownWordError : public Error {
public:
    explicit UnknownWordError(std::string word)
        : Error("unknown word: " + word), word_(std::move(word)) {}

    const std::string& word() const noexcept { return word_; }

private:
    std::string word_;
};

/// Cosine with a zero vector.
class UndefinedSimilarityError : public Error {
public:
    using Error::Error;
};

/// An out-of-vocabulary token without any character n-grams.
class NoSignalError : public Error {
public:
    explicit NoSignalError(std::string token)
        : Error("no subword signal for token: " + token), token_(std::move(token)) {}

    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

}  // namespace webvec
