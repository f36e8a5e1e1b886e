#pragma once

#include <string_view>
#include <utility>

namespace affect::detail {

// Built-in lemma exception table: irregular plurals, irregular verb forms,
// and words the suffix rules would otherwise mangle. Replaceable at runtime
// via a two-column TSV (see PreprocessConfig::load_lemma_exceptions).
inline constexpr std::pair<std::string_view, std::string_view> kLemmaExceptions[] = {
    // irregular noun plurals
    {"women", "woman"},
    {"men", "man"},
    {"children", "child"},
    {"people", "person"},
    {"feet", "foot"},
    {"teeth", "tooth"},
    {"geese", "goose"},
    {"mice", "mouse"},
    {"lice", "louse"},
    {"oxen", "ox"},
    {"dice", "die"},
    {"wives", "wife"},
    {"lives", "life"},
    {"knives", "knife"},
    {"wolves", "wolf"},
    {"leaves", "leaf"},
    {"selves", "self"},
    {"shelves", "shelf"},
    {"halves", "half"},
    {"thieves", "thief"},
    {"loaves", "loaf"},
    {"calves", "calf"},
    {"scarves", "scarf"},
    {"ladies", "lady"},
    {"babies", "baby"},
    {"movies", "movie"},
    {"cookies", "cookie"},
    {"series", "series"},
    {"species", "species"},
    {"analyses", "analysis"},
    {"crises", "crisis"},
    {"theses", "thesis"},
    {"phenomena", "phenomenon"},
    {"criteria", "criterion"},
    {"data", "datum"},
    {"media", "medium"},
    {"indices", "index"},
    {"matrices", "matrix"},
    {"heroes", "hero"},
    {"potatoes", "potato"},
    {"tomatoes", "tomato"},
    {"echoes", "echo"},
    {"stories", "story"},
    {"parties", "party"},
    {"cities", "city"},
    {"countries", "country"},
    {"families", "family"},
    {"bodies", "body"},
    {"studies", "study"},
    {"guys", "guy"},
    {"days", "day"},
    {"ways", "way"},
    {"boys", "boy"},
    {"keys", "key"},
    {"toys", "toy"},
    {"sexes", "sex"},
    // be / auxiliaries
    {"am", "be"},
    {"is", "be"},
    {"are", "be"},
    {"was", "be"},
    {"were", "be"},
    {"been", "be"},
    {"being", "be"},
    {"isnt", "be"},
    {"arent", "be"},
    {"wasnt", "be"},
    {"werent", "be"},
    {"has", "have"},
    {"had", "have"},
    {"having", "have"},
    {"hasnt", "have"},
    {"hadnt", "have"},
    {"does", "do"},
    {"did", "do"},
    {"doing", "do"},
    {"done", "do"},
    {"doesnt", "do"},
    {"didnt", "do"},
    {"wont", "will"},
    {"cant", "cant"},
    {"dont", "do"},
    {"wouldnt", "would"},
    {"couldnt", "could"},
    {"shouldnt", "should"},
    // irregular verbs (past / participle / gerund with e-restoration)
    {"went", "go"},
    {"gone", "go"},
    {"goes", "go"},
    {"going", "go"},
    {"got", "get"},
    {"gotten", "get"},
    {"getting", "get"},
    {"gets", "get"},
    {"made", "make"},
    {"making", "make"},
    {"makes", "make"},
    {"said", "say"},
    {"says", "say"},
    {"saying", "say"},
    {"came", "come"},
    {"coming", "come"},
    {"comes", "come"},
    {"took", "take"},
    {"taken", "take"},
    {"taking", "take"},
    {"takes", "take"},
    {"saw", "see"},
    {"seen", "see"},
    {"sees", "see"},
    {"seeing", "see"},
    {"knew", "know"},
    {"known", "know"},
    {"knows", "know"},
    {"knowing", "know"},
    {"thought", "think"},
    {"thinks", "think"},
    {"thinking", "think"},
    {"told", "tell"},
    {"tells", "tell"},
    {"telling", "tell"},
    {"became", "become"},
    {"becomes", "become"},
    {"becoming", "become"},
    {"left", "leave"},
    {"leaving", "leave"},
    {"felt", "feel"},
    {"feels", "feel"},
    {"feeling", "feel"},
    {"put", "put"},
    {"putting", "put"},
    {"kept", "keep"},
    {"keeping", "keep"},
    {"began", "begin"},
    {"begun", "begin"},
    {"beginning", "begin"},
    {"wrote", "write"},
    {"written", "write"},
    {"writing", "write"},
    {"writes", "write"},
    {"found", "find"},
    {"finding", "find"},
    {"finds", "find"},
    {"gave", "give"},
    {"given", "give"},
    {"gives", "give"},
    {"giving", "give"},
    {"spoke", "speak"},
    {"spoken", "speak"},
    {"speaking", "speak"},
    {"ran", "run"},
    {"running", "run"},
    {"runs", "run"},
    {"ate", "eat"},
    {"eaten", "eat"},
    {"eating", "eat"},
    {"drank", "drink"},
    {"drunk", "drink"},
    {"drinking", "drink"},
    {"drove", "drive"},
    {"driven", "drive"},
    {"driving", "drive"},
    {"drives", "drive"},
    {"sang", "sing"},
    {"sung", "sing"},
    {"singing", "sing"},
    {"sat", "sit"},
    {"sitting", "sit"},
    {"stood", "stand"},
    {"standing", "stand"},
    {"lost", "lose"},
    {"losing", "lose"},
    {"loses", "lose"},
    {"paid", "pay"},
    {"paying", "pay"},
    {"pays", "pay"},
    {"met", "meet"},
    {"meeting", "meet"},
    {"sent", "send"},
    {"sending", "send"},
    {"built", "build"},
    {"building", "build"},
    {"spent", "spend"},
    {"spending", "spend"},
    {"bought", "buy"},
    {"buying", "buy"},
    {"buys", "buy"},
    {"caught", "catch"},
    {"catching", "catch"},
    {"taught", "teach"},
    {"teaching", "teach"},
    {"brought", "bring"},
    {"bringing", "bring"},
    {"fought", "fight"},
    {"fighting", "fight"},
    {"sought", "seek"},
    {"heard", "hear"},
    {"hearing", "hear"},
    {"hears", "hear"},
    {"held", "hold"},
    {"holding", "hold"},
    {"holds", "hold"},
    {"meant", "mean"},
    {"meaning", "mean"},
    {"means", "mean"},
    {"read", "read"},
    {"reading", "read"},
    {"reads", "read"},
    {"let", "let"},
    {"letting", "let"},
    {"lets", "let"},
    {"won", "win"},
    {"winning", "win"},
    {"wins", "win"},
    {"wore", "wear"},
    {"worn", "wear"},
    {"wearing", "wear"},
    {"wears", "wear"},
    {"chose", "choose"},
    {"chosen", "choose"},
    {"choosing", "choose"},
    {"broke", "break"},
    {"broken", "break"},
    {"breaking", "break"},
    {"fell", "fall"},
    {"fallen", "fall"},
    {"falling", "fall"},
    {"falls", "fall"},
    {"threw", "throw"},
    {"thrown", "throw"},
    {"throwing", "throw"},
    {"throws", "throw"},
    {"flew", "fly"},
    {"flown", "fly"},
    {"flying", "fly"},
    {"flies", "fly"},
    {"grew", "grow"},
    {"grown", "grow"},
    {"growing", "grow"},
    {"grows", "grow"},
    {"slept", "sleep"},
    {"sleeping", "sleep"},
    {"used", "use"},
    {"using", "use"},
    {"uses", "use"},
    {"loved", "love"},
    {"loving", "love"},
    {"loves", "love"},
    {"liked", "like"},
    {"liking", "like"},
    {"likes", "like"},
    {"hated", "hate"},
    {"hating", "hate"},
    {"hates", "hate"},
    {"moved", "move"},
    {"moving", "move"},
    {"moves", "move"},
    {"lived", "live"},
    {"living", "live"},
    {"hoped", "hope"},
    {"hoping", "hope"},
    {"hopes", "hope"},
    {"smiled", "smile"},
    {"smiling", "smile"},
    {"smiles", "smile"},
    {"tried", "try"},
    {"trying", "try"},
    {"tries", "try"},
    {"believing", "believe"},
    {"believed", "believe"},
    {"believes", "believe"},
    {"amazing", "amaze"},
    {"amazed", "amaze"},
    {"died", "die"},
    {"dying", "die"},
    {"dies", "die"},
    {"lied", "lie"},
    {"lying", "lie"},
    {"ties", "tie"},
    {"tied", "tie"},
    // words the plain suffix rules would mangle
    {"this", "this"},
    {"thus", "thus"},
    {"plus", "plus"},
    {"news", "news"},
    {"during", "during"},
    {"morning", "morning"},
    {"evening", "evening"},
    {"nothing", "nothing"},
    {"something", "something"},
    {"anything", "anything"},
    {"everything", "everything"},
    {"thing", "thing"},
    {"king", "king"},
    {"ring", "ring"},
    {"song", "song"},
    {"wing", "wing"},
    {"spring", "spring"},
    {"string", "string"},
    {"indeed", "indeed"},
    {"hundred", "hundred"},
    {"tired", "tire"},
    {"always", "always"},
    {"perhaps", "perhaps"},
    {"besides", "besides"},
    {"sometimes", "sometimes"},
    {"unless", "unless"},
    {"whereas", "whereas"},
    {"towards", "towards"},
    {"yours", "yours"},
    {"hers", "hers"},
    {"ours", "ours"},
    {"theirs", "theirs"},
    {"its", "its"},
    {"bitches", "bitch"},
};

} // namespace affect::detail
