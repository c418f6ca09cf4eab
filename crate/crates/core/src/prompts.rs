//! Prompt templates. The text of each template is fixed; only the marked
//! slot is substituted. Bump [`PROMPT_VERSION`] whenever a template changes.

use crate::triple::format_triple_list;
use crate::Triple;

pub const PROMPT_VERSION: &str = "v1";

const KG2TEXT: &str = r#"You are a text generator that reconstructs the original text from a given knowledge graph.
The knowledge graph is represented as a list of triples in the format: ["subject", "relation", "object"].

Your task is to generate a coherent, concise, and natural text that could have been the origin of the given knowledge graph.
The text should accurately describe the relationships and entities in the triples, ensuring it is informative and logically structured.

Guidelines:
1. The generated text can consist of one or more paragraphs, depending on the complexity of the triples.
2. Ensure the text flows naturally, as if it were written by a human.
3. Include all entities and relationships from the triples.
4. Avoid adding any information not present in the triples.

Triples: {input triples}
Text:"#;

const TEXT2KG: &str = r#"You are a knowledge graph generator. Given a text, extract entities and their relationships, and represent them as a list of triples in the format: ["subject", "relation", "object"].

Examples:

Example 1:
Text: Coburg Peak (, ) is the rocky peak rising to 783 m in Erul Heights on Trinity Peninsula in Graham Land, Antarctica. It is surmounting Cugnot Ice Piedmont to the northeast. The peak is named after the Bulgarian royal house of Coburg (Saxe-Coburg-Gotha), 1887–1946.
Triples: [["TRINITY PENINSULA", "part of", "GRAHAM LAND"], ["TRINITY PENINSULA", "continent", "ANTARCTICA"], ["GRAHAM LAND", "continent", "ANTARCTICA"]]
Example 2:
Text: Harald Kaas (19 May 1868 – 5 December 1953) was a Norwegian architect. Kaas was born in Christiania (now Oslo), Norway. He studied at the Norwegian National Academy of Craft and Art Industry, then at Baugewerkschule in Eckernförde and finally at Polytechnicum in Munich. He worked for a couple of years in the Colony of Natal in South Africa. He was employed by the Norwegian State Railways from 1908 to 1914, and designed stations on the Arendal Line, Bergen Line and Solør Line for the company. Kaas died on 5 December 1953 and was buried on 20 May 1954 at Vår Frelsers gravlund in Oslo.
Triples: [["HARALD KAAS", "date of birth", "19 MAY 1868"], ["HARALD KAAS", "date of death", "5 DECEMBER 1953"], ["HARALD KAAS", "employer", "NORWEGIAN STATE RAILWAYS"], ["POLYTECHNICUM", "headquarters location", "MUNICH"], ["BERGEN LINE", "owned by", "NORWEGIAN STATE RAILWAYS"]]
Example 3:
Text: Utus Peak (, ) is the rocky peak rising to 1217 m in Trakiya Heights on Trinity Peninsula in Graham Land, Antarctica. The peak is named after the ancient Roman town of Utus in Northern Bulgaria.
Triples: [["TRAKIYA HEIGHTS", "continent", "ANTARCTICA"], ["TRINITY PENINSULA", "part of", "GRAHAM LAND"], ["TRINITY PENINSULA", "continent", "ANTARCTICA"], ["GRAHAM LAND", "continent", "ANTARCTICA"]]

Now, generate the list of triples for the following text:
Text: {input text}
Triples:"#;

const NON_INFORMATIVE: &str = r#"You are an expert in knowledge graph analysis.
Decide if a batch of triples about an entity contains only NON-INFORMATIVE knowledge.

Definition
- NON-INFORMATIVE: trivial, obvious, generic, or vague facts that do not add meaningful knowledge.
  This includes:
  - Common sense or obvious traits (e.g., humans are mortal, fire is hot)
  - Basic opposites or simple taxonomic facts (e.g., male opposite of female, male different from man/masculinity)
  - Overly broad or vague relations that apply to almost any entity
    (e.g., human has effect artificial object, human interacts with environment)
- INFORMATIVE: specific, distinctive, or non-obvious facts that provide concrete knowledge about the entity
  (e.g., birthplace, achievements, historical events, numerical values).

Examples

NON-INFORMATIVE:

["male", "opposite of", "female"]

["human", "has characteristic", "mortality"]

["minus sign", "opposite of", "plus sign"]

["human", "has effect", "artificial object"]

["human", "physically interacts with", "natural environment"]

INFORMATIVE:

["Albert Einstein", "born in", "Ulm"]

["Albert Einstein", "developed", "theory of relativity"]

["Paris", "capital of", "France"]

["Paris", "population", "2,161,000"]

Task

Entity: {entity_name} ({entity_id})

Triples:

{triples_text}

Question

Are all of these triples NON-INFORMATIVE?

Output (STRICT)

YES  (all non-informative)

NO   (at least one informative)"#;

const TRIPLES_SLOT: &str = "{input triples}";
const TEXT_SLOT: &str = "{input text}";

/// Prompt asking a model to write text describing `triples`.
pub fn render_kg2text_prompt(triples: &[Triple]) -> String {
    KG2TEXT.replace(TRIPLES_SLOT, &format_triple_list(triples))
}

/// Recovers the triple list embedded by [`render_kg2text_prompt`].
pub fn triples_from_kg2text_prompt(prompt: &str) -> Option<Vec<Triple>> {
    let start = prompt.rfind("\nTriples: ")? + "\nTriples: ".len();
    let end = start + prompt[start..].rfind("\nText:")?;
    crate::parse_triple_list(&prompt[start..end]).ok()
}

/// Few-shot prompt asking a model to extract triples from `text`. Returns
/// `None` for blank input.
pub fn render_text2kg_prompt(text: &str) -> Option<String> {
    let text = text.trim();
    (!text.is_empty()).then(|| TEXT2KG.replace(TEXT_SLOT, text))
}

/// Prompt asking whether all outgoing triples of an entity are trivial.
pub fn render_non_informative_prompt(entity: &str, entity_id: Option<&str>, triples: &[Triple]) -> String {
    let lines: Vec<String> = triples
        .iter()
        .map(|t| format_triple_list(std::slice::from_ref(t)))
        .map(|s| s[1..s.len() - 1].to_string())
        .collect();
    NON_INFORMATIVE
        .replace("{entity_name}", entity)
        .replace("{entity_id}", entity_id.unwrap_or("no id"))
        .replace("{triples_text}", &lines.join("\n"))
}
