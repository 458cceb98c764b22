// Regenerates vader_corpus.tsv from vader_corpus_sentences.txt using the
// reference implementation (npm package `vader-sentiment`, Apache-2.0).
//
//   npm install vader-sentiment
//   node generate_vader_fixture.js > vader_corpus.tsv
//
// The package bundles the same vader_lexicon.txt that ships in data/.
const fs = require('fs');
const path = require('path');
const vader = require('vader-sentiment');

const sentences = fs
  .readFileSync(path.join(__dirname, 'vader_corpus_sentences.txt'), 'utf8')
  .split('\n')
  .filter(line => line.length > 0);

console.log('# sentence\tneg\tneu\tpos\tcompound');
for (const sentence of sentences) {
  const s = vader.SentimentIntensityAnalyzer.polarity_scores(sentence);
  console.log(`${sentence}\t${s.neg}\t${s.neu}\t${s.pos}\t${s.compound}`);
}
