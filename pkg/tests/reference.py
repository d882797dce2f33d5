"""Published reference values used by several test modules."""

# category -> number of the 235 documents attributed to it (292 attributions)
WC_COUNTS = {
    "Cardiac Cardiovascular Systems": 186,
    "Medicine General Internal": 24,
    "Engineering Biomedical": 10,
    "Peripheral Vascular Disease": 10,
    "Hematology": 8,
    "Physiology": 8,
    "Emergency Medicine": 7,
    "Clinical Neurology": 4,
    "Critical Care Medicine": 4,
    "Pharmacology Pharmacy": 4,
    "Anesthesiology": 3,
    "Pediatrics": 3,
    "Public Environmental Occupational Health": 3,
    "Sport Sciences": 3,
    "Biochemical Research Methods": 2,
    "Cell Biology": 2,
    "Chemistry Analytical": 2,
    "Genetics Heredity": 2,
    "Surgery": 2,
    "Biology": 1,
    "Medicine Legal": 1,
    "Neurosciences": 1,
    "Nursing": 1,
    "Obstetrics Gynecology": 1,
}
N_DOCUMENTS = 235
N_ATTRIBUTIONS = 292
