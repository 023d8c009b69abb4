#pragma once

#include <string_view>

// Data files from data/, compiled into the library.
namespace soaccept::bundled {

std::string_view stopwords();
std::string_view polarity_lexicon();
std::string_view keywords_java();
std::string_view keywords_js();

}  // namespace soaccept::bundled
