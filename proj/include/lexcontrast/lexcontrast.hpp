#ifndef LEXCONTRAST_LEXCONTRAST_HPP
#define LEXCONTRAST_LEXCONTRAST_HPP

#include <lexcontrast/artifacts.hpp>
#include <lexcontrast/assumption_pipeline.hpp>
#include <lexcontrast/classifier_probe.hpp>
#include <lexcontrast/cli.hpp>
#include <lexcontrast/config.hpp>
#include <lexcontrast/corpus.hpp>
#include <lexcontrast/count_matrix.hpp>
#include <lexcontrast/csv.hpp>
#include <lexcontrast/distributions.hpp>
#include <lexcontrast/error.hpp>
#include <lexcontrast/lexicon.hpp>
#include <lexcontrast/log_odds.hpp>
#include <lexcontrast/mv_stats.hpp>
#include <lexcontrast/plot_data.hpp>
#include <lexcontrast/pos_annotations.hpp>
#include <lexcontrast/report_json.hpp>
#include <lexcontrast/text_features.hpp>
#include <lexcontrast/tokenizer.hpp>
#include <lexcontrast/unicode.hpp>

#endif
