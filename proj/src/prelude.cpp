#include "typecause/syntax.hpp"

namespace typecause {

namespace {

// Library environment visible to every module. Library types are background
// facts: uses of these names are blameable, their declared types are not.
constexpr std::string_view kPrelude = R"(
data Maybe a = Nothing | Just a
data Either a b = Left a | Right b

(+) :: Int -> Int -> Int
(-) :: Int -> Int -> Int
(*) :: Int -> Int -> Int
(/) :: Float -> Float -> Float
(+.) :: Float -> Float -> Float
(-.) :: Float -> Float -> Float
(*.) :: Float -> Float -> Float
(==) :: a -> a -> Bool
(/=) :: a -> a -> Bool
(<) :: a -> a -> Bool
(<=) :: a -> a -> Bool
(>) :: a -> a -> Bool
(>=) :: a -> a -> Bool
(&&) :: Bool -> Bool -> Bool
(||) :: Bool -> Bool -> Bool
(++) :: [a] -> [a] -> [a]
(:) :: a -> [a] -> [a]
(.) :: (b -> c) -> (a -> b) -> a -> c
($) :: (a -> b) -> a -> b

not :: Bool -> Bool
div :: Int -> Int -> Int
mod :: Int -> Int -> Int
negate :: Int -> Int
abs :: Int -> Int
max :: a -> a -> a
min :: a -> a -> a
sqrt :: Float -> Float
toFloat :: Int -> Float
round :: Float -> Int
show :: a -> String
error :: String -> a
id :: a -> a
const :: a -> b -> a
fst :: (a, b) -> a
snd :: (a, b) -> b

length :: [a] -> Int
sum :: [Int] -> Int
sumf :: [Float] -> Float
product :: [Int] -> Int
maximum :: [a] -> a
minimum :: [a] -> a
head :: [a] -> a
tail :: [a] -> [a]
last :: [a] -> a
init :: [a] -> [a]
null :: [a] -> Bool
reverse :: [a] -> [a]
concat :: [[a]] -> [a]
concatMap :: (a -> [b]) -> [a] -> [b]
map :: (a -> b) -> [a] -> [b]
filter :: (a -> Bool) -> [a] -> [a]
foldr :: (a -> b -> b) -> b -> [a] -> b
foldl :: (b -> a -> b) -> b -> [a] -> b
zip :: [a] -> [b] -> [(a, b)]
zipWith :: (a -> b -> c) -> [a] -> [b] -> [c]
unzip :: [(a, b)] -> ([a], [b])
take :: Int -> [a] -> [a]
drop :: Int -> [a] -> [a]
elem :: a -> [a] -> Bool
lookup :: a -> [(a, b)] -> Maybe b
replicate :: Int -> a -> [a]
range :: Int -> Int -> [Int]
and :: [Bool] -> Bool
or :: [Bool] -> Bool
any :: (a -> Bool) -> [a] -> Bool
all :: (a -> Bool) -> [a] -> Bool

ord :: Char -> Int
chr :: Int -> Char
toUpper :: Char -> Char
toLower :: Char -> Char
isDigit :: Char -> Bool
isSpace :: Char -> Bool
digitToInt :: Char -> Int
words :: String -> [String]
unwords :: [String] -> String
lines :: String -> [String]
unlines :: [String] -> String
read :: String -> Int

maybe :: b -> (a -> b) -> Maybe a -> b
fromMaybe :: a -> Maybe a -> a
either :: (a -> c) -> (b -> c) -> Either a b -> c
)";

}  // namespace

std::string_view prelude_source() { return kPrelude; }

}  // namespace typecause
