#pragma once

#include <stdexcept>
#include <string>

namespace spectext {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No token survived tokenization and pruning.
class EmptyCorpus : public Error {
public:
    explicit EmptyCorpus(const std::string& what = "corpus contains no tokens") : Error(what) {}
};

/// A normalization degree is zero; the transition pipeline should never produce this.
class DegenerateDegree : public Error {
public:
    using Error::Error;
};

/// A dissimilarity value left [0,1], i.e. the position weights were not normalized.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A render or export axis exceeds the number of computed eigenpairs.
class AxisOutOfRange : public Error {
public:
    using Error::Error;
};

/// A vocabulary word has no ground-truth label.
class MissingLabel : public Error {
public:
    using Error::Error;
};

/// Malformed input file (manifest, chain config, label file).
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace spectext
