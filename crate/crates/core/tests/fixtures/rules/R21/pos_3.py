import pandas
t = pandas.read_table("a.tsv")  # expect: R21
