//! (text, KG) dataset construction: text generation per subgraph, the
//! train/test split, and JSONL I/O.

mod dataset;
mod generate;

pub use crate::prompts::{render_kg2text_prompt, render_text2kg_prompt, PROMPT_VERSION};
pub use dataset::{
    assemble, read_samples, read_split, sample_from_value, write_dataset, Dataset, DatasetError, DatasetSample,
    SampleMeta, TEST_FILE, TRAIN_FILE,
};
pub use generate::{generate_texts, DropRecord, GenerationConfig, GenerationOutcome, TemplateClient, MAX_DROP_RATE};
