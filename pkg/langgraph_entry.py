# langgraph_entry.py
from nmqlle.graph import NmQllePipeline

graph = NmQllePipeline().compile()
