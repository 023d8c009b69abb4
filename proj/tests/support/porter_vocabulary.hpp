#pragma once

#include <array>
#include <string_view>
#include <utility>

namespace soaccept::test {

// Words from Porter's published test vocabulary with their reference stems.
inline constexpr std::array<std::pair<std::string_view, std::string_view>, 193> kPorterVocabulary{{
    {"a", "a"},
    {"aaron", "aaron"},
    {"abaissiez", "abaissiez"},
    {"abandon", "abandon"},
    {"abandoned", "abandon"},
    {"abase", "abas"},
    {"abash", "abash"},
    {"abate", "abat"},
    {"abated", "abat"},
    {"abatement", "abat"},
    {"abatements", "abat"},
    {"abates", "abat"},
    {"abbess", "abbess"},
    {"abbey", "abbei"},
    {"abbeys", "abbei"},
    {"abbominable", "abbomin"},
    {"abbot", "abbot"},
    {"abbots", "abbot"},
    {"abbreviated", "abbrevi"},
    {"abed", "ab"},
    {"abel", "abel"},
    {"aberga", "aberga"},
    {"abergavenny", "abergavenni"},
    {"abet", "abet"},
    {"abetting", "abet"},
    {"abhominable", "abhomin"},
    {"abhor", "abhor"},
    {"abhorr", "abhorr"},
    {"abhorred", "abhor"},
    {"abhorring", "abhor"},
    {"abhors", "abhor"},
    {"abhorson", "abhorson"},
    {"abide", "abid"},
    {"abides", "abid"},
    {"abilities", "abil"},
    {"ability", "abil"},
    {"abject", "abject"},
    {"abjectly", "abjectli"},
    {"abjects", "abject"},
    {"abjur", "abjur"},
    {"abjure", "abjur"},
    {"able", "abl"},
    {"abler", "abler"},
    {"aboard", "aboard"},
    {"abode", "abod"},
    {"aboded", "abod"},
    {"abodements", "abod"},
    {"aboding", "abod"},
    {"abominable", "abomin"},
    {"abominably", "abomin"},
    {"abominations", "abomin"},
    {"abort", "abort"},
    {"abortive", "abort"},
    {"abortives", "abort"},
    {"abound", "abound"},
    {"abounding", "abound"},
    {"about", "about"},
    {"above", "abov"},
    {"abr", "abr"},
    {"abraham", "abraham"},
    {"abram", "abram"},
    {"abreast", "abreast"},
    {"abridg", "abridg"},
    {"abridge", "abridg"},
    {"abridged", "abridg"},
    {"abridgment", "abridg"},
    {"abroach", "abroach"},
    {"abroad", "abroad"},
    {"abrogate", "abrog"},
    {"abrook", "abrook"},
    {"abrupt", "abrupt"},
    {"abruption", "abrupt"},
    {"abruptly", "abruptli"},
    {"absence", "absenc"},
    {"absent", "absent"},
    {"absey", "absei"},
    {"absolute", "absolut"},
    {"absolutely", "absolut"},
    {"absolv", "absolv"},
    {"absolver", "absolv"},
    {"abstains", "abstain"},
    {"abstemious", "abstemi"},
    {"abstinence", "abstin"},
    {"abstract", "abstract"},
    {"absurd", "absurd"},
    {"absyrtus", "absyrtu"},
    {"abundance", "abund"},
    {"abundant", "abund"},
    {"abundantly", "abundantli"},
    {"abus", "abu"},
    {"abuse", "abus"},
    {"abused", "abus"},
    {"abuser", "abus"},
    {"abuses", "abus"},
    {"abusing", "abus"},
    {"abutting", "abut"},
    {"aby", "abi"},
    {"abysm", "abysm"},
    {"ac", "ac"},
    {"academe", "academ"},
    {"academes", "academ"},
    {"accent", "accent"},
    {"accents", "accent"},
    {"accept", "accept"},
    {"acceptable", "accept"},
    {"acceptance", "accept"},
    {"accepted", "accept"},
    {"accepts", "accept"},
    {"access", "access"},
    {"accessary", "accessari"},
    {"accessible", "access"},
    {"accidence", "accid"},
    {"accident", "accid"},
    {"accidental", "accident"},
    {"accidentally", "accident"},
    {"accidents", "accid"},
    {"accite", "accit"},
    {"accited", "accit"},
    {"accites", "accit"},
    {"acclamations", "acclam"},
    {"accommodate", "accommod"},
    {"accommodated", "accommod"},
    {"accommodation", "accommod"},
    {"accommodations", "accommod"},
    {"accommodo", "accommodo"},
    {"accompanied", "accompani"},
    {"accompany", "accompani"},
    {"accompanying", "accompani"},
    {"accomplices", "accomplic"},
    {"accomplish", "accomplish"},
    {"accomplished", "accomplish"},
    {"accomplishing", "accomplish"},
    {"accomplishment", "accomplish"},
    {"accompt", "accompt"},
    {"accord", "accord"},
    {"accordant", "accord"},
    {"accorded", "accord"},
    {"accordeth", "accordeth"},
    {"according", "accord"},
    {"accordingly", "accordingli"},
    {"accords", "accord"},
    {"accost", "accost"},
    {"accosted", "accost"},
    {"account", "account"},
    {"accountant", "account"},
    {"accounted", "account"},
    {"accounts", "account"},
    {"accoutred", "accoutr"},
    {"accoutrement", "accoutr"},
    {"accoutrements", "accoutr"},
    {"accrue", "accru"},
    {"accumulate", "accumul"},
    {"accumulated", "accumul"},
    {"accumulation", "accumul"},
    {"accurs", "accur"},
    {"accursed", "accurs"},
    {"accurst", "accurst"},
    {"accus", "accu"},
    {"accusation", "accus"},
    {"accusations", "accus"},
    {"accusative", "accus"},
    {"accusativo", "accusativo"},
    {"accuse", "accus"},
    {"accused", "accus"},
    {"accuser", "accus"},
    {"accusers", "accus"},
    {"accuses", "accus"},
    {"accuseth", "accuseth"},
    {"accusing", "accus"},
    {"accustom", "accustom"},
    {"accustomed", "accustom"},
    {"ace", "ac"},
    {"acerb", "acerb"},
    {"ache", "ach"},
    {"acheron", "acheron"},
    {"aches", "ach"},
    {"achiev", "achiev"},
    {"achieve", "achiev"},
    {"achieved", "achiev"},
    {"achievement", "achiev"},
    {"achievements", "achiev"},
    {"achiever", "achiev"},
    {"achieves", "achiev"},
    {"achieving", "achiev"},
    {"achilles", "achil"},
    {"coming", "come"},
    {"comings", "come"},
    {"generalizations", "gener"},
    {"oscillators", "oscil"},
    {"relational", "relat"},
    {"conditional", "condit"},
    {"hopefulness", "hope"},
    {"sensitivities", "sensit"},
}};

}  // namespace soaccept::test
